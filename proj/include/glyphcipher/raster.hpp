#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "glyphcipher/errors.hpp"

// Grayscale raster in memory, netpbm file I/O, and deterministic rendering
// of letters from a fixed 5x7 bitmap font.

namespace glyphcipher {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major, top row first

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    }

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

// BT.601 luma, rounded to nearest integer.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(0.2989 * r + 0.5870 * g + 0.1140 * b));
}

namespace detail {

class PnmReader {
public:
    explicit PnmReader(const std::filesystem::path& path) : path_(path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw FormatError("cannot open image: " + path.string());
        data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    GrayImage read() {
        const std::string magic = {next_byte("magic number"), next_byte("magic number")};
        if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
            fail("unsupported magic '" + magic + "' (want P2/P3/P5/P6)", 0);
        const bool color = magic == "P3" || magic == "P6";
        const bool binary = magic == "P5" || magic == "P6";

        const int w = next_int("width");
        const int h = next_int("height");
        if (w < 1 || h < 1) fail("image dimensions must be >= 1", pos_);
        const std::size_t maxval_at = pos_;
        const int maxval = next_int("maxval");
        if (maxval != 255) fail("maxval must be 255, got " + std::to_string(maxval), maxval_at);

        GrayImage img(w, h);
        const std::size_t samples = static_cast<std::size_t>(w) * h * (color ? 3 : 1);
        std::vector<std::uint8_t> raw(samples);
        if (binary) {
            // exactly one whitespace byte separates the header from the data
            const char sep = next_byte("separator after maxval");
            if (!std::isspace(static_cast<unsigned char>(sep)))
                fail("expected whitespace after maxval", pos_ - 1);
            if (data_.size() - pos_ < samples)
                fail("truncated pixel data: need " + std::to_string(samples) + " bytes, have " +
                         std::to_string(data_.size() - pos_),
                     data_.size());
            for (auto& s : raw) s = static_cast<std::uint8_t>(data_[pos_++]);
        } else {
            for (auto& s : raw) {
                const std::size_t at = pos_;
                const int v = next_int("pixel value");
                if (v < 0 || v > maxval) fail("pixel value " + std::to_string(v) + " out of range", at);
                s = static_cast<std::uint8_t>(v);
            }
        }
        if (color) {
            for (std::size_t i = 0; i < img.pixels.size(); ++i)
                img.pixels[i] = luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
        } else {
            img.pixels = std::move(raw);
        }
        return img;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::size_t at) const {
        throw FormatError("image " + path_.string() + ": " + what + " at byte " +
                          std::to_string(at));
    }

    char next_byte(const std::string& what) {
        if (pos_ >= data_.size()) fail("unexpected end of file reading " + what, data_.size());
        return data_[pos_++];
    }

    // Skips whitespace and '#' comments, then parses a decimal integer.
    int next_int(const std::string& what) {
        while (pos_ < data_.size()) {
            const unsigned char c = static_cast<unsigned char>(data_[pos_]);
            if (std::isspace(c)) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        const std::size_t start = pos_;
        long v = 0;
        bool any = false;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > 1 << 30) fail("number too large reading " + what, start);
            ++pos_;
            any = true;
        }
        if (!any) fail("expected integer for " + what, start);
        return static_cast<int>(v);
    }

    std::filesystem::path path_;
    std::string data_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Reads P2/P5 grayscale or P3/P6 color netpbm (maxval 255 only).
// Color converts to gray via BT.601 luma.
inline GrayImage read_image(const std::filesystem::path& path) {
    return detail::PnmReader(path).read();
}

// Bit-exact P5 output: "P5\n<w> <h>\n255\n" then raw rows, top first.
inline void write_image(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open image for writing: " + path.string());
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw FormatError("failed writing image: " + path.string());
}

// Fixed 5x7 bitmap font for A-Z. Every glyph is a single 4-connected
// component, touches all four edges of its cell, and no two glyphs are
// equal; tests enforce all three.
class GlyphFont {
public:
    static constexpr int kCols = 5;
    static constexpr int kRows = 7;

    static const GlyphFont& builtin() {
        static const GlyphFont font;
        return font;
    }

    bool ink(char letter, int row, int col) const {
        return cells_[index(letter)][static_cast<std::size_t>(row) * kCols + col] != 0;
    }

    int ink_count(char letter) const {
        int n = 0;
        for (std::uint8_t c : cells_[index(letter)]) n += c;
        return n;
    }

private:
    static std::size_t index(char letter) {
        if (letter < 'A' || letter > 'Z')
            throw std::invalid_argument("GlyphFont: letter out of A-Z");
        return static_cast<std::size_t>(letter - 'A');
    }

    GlyphFont() {
        static constexpr const char* rows[26][7] = {
            {"#####", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}, // A
            {"#####", "#...#", "#...#", "####.", "#...#", "#...#", "#####"}, // B
            {"#####", "#....", "#....", "#....", "#....", "#....", "#####"}, // C
            {"####.", "#..##", "#...#", "#...#", "#...#", "#..##", "####."}, // D
            {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}, // E
            {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}, // F
            {"#####", "#....", "#....", "#.###", "#...#", "#...#", "#####"}, // G
            {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}, // H
            {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"}, // I
            {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", "####."}, // J
            {"#..##", "#..#.", "#.##.", "###..", "#.##.", "#..#.", "#..##"}, // K
            {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}, // L
            {"#####", "#.#.#", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}, // M
            {"#...#", "##..#", "###.#", "#.###", "#...#", "#...#", "#...#"}, // N
            {"#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}, // O
            {"#####", "#...#", "#...#", "#####", "#....", "#....", "#...."}, // P
            {"#####", "#...#", "#...#", "#...#", "#.#.#", "#.###", "#####"}, // Q
            {"#####", "#...#", "#...#", "####.", "#.##.", "#..##", "#...#"}, // R
            {"#####", "#....", "#....", "#####", "....#", "....#", "#####"}, // S
            {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}, // T
            {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#####"}, // U
            {"#...#", "#...#", "#...#", "#...#", "##.##", ".###.", "..#.."}, // V
            {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", "#####"}, // W
            {"##.##", "##.##", ".###.", "..#..", ".###.", "##.##", "##.##"}, // X
            {"#...#", "#...#", "##.##", ".###.", "..#..", "..#..", "..#.."}, // Y
            {"#####", "...##", "..##.", ".##..", "##...", "#....", "#####"}, // Z
        };
        for (int g = 0; g < 26; ++g)
            for (int r = 0; r < kRows; ++r)
                for (int c = 0; c < kCols; ++c)
                    cells_[g][static_cast<std::size_t>(r) * kCols + c] = rows[g][r][c] == '#';
    }

    std::array<std::array<std::uint8_t, kCols * kRows>, 26> cells_{};
};

// Layout for rendered text: black glyphs on a white background, left to
// right, wrapping after per_row slots. A space consumes a slot without ink.
struct RenderSpec {
    int scale = 10;   // pixels per font cell; 10 makes a glyph 50x70
    int spacing = 20; // pixels between glyph cells
    int margin = 20;  // blank border on all sides
    int per_row = 10; // glyph slots per line

    void validate() const {
        if (scale < 1 || spacing < 1 || per_row < 1 || margin < 0)
            throw std::invalid_argument("RenderSpec: scale/spacing/per_row >= 1, margin >= 0");
    }
};

inline GrayImage render_text(std::string_view text, const GlyphFont& font,
                             const RenderSpec& spec = {}) {
    spec.validate();
    std::string upper;
    upper.reserve(text.size());
    for (char c : text) {
        if (c == ' ') {
            upper.push_back(c);
        } else {
            const unsigned char u = static_cast<unsigned char>(c);
            if (!std::isalpha(u))
                throw FormatError(std::string("render_text: invalid character '") + c + "'");
            upper.push_back(static_cast<char>(std::toupper(u)));
        }
    }

    const int count = static_cast<int>(upper.size());
    const int cell_w = GlyphFont::kCols * spec.scale;
    const int cell_h = GlyphFont::kRows * spec.scale;
    const int cols = count == 0 ? 0 : std::min(count, spec.per_row);
    const int rows = count == 0 ? 0 : (count + spec.per_row - 1) / spec.per_row;
    const int width = 2 * spec.margin + cols * cell_w + (cols > 0 ? (cols - 1) * spec.spacing : 0);
    const int height = 2 * spec.margin + rows * cell_h + (rows > 0 ? (rows - 1) * spec.spacing : 0);
    if (width < 1 || height < 1) throw FormatError("render_text: nothing to render");

    GrayImage img(width, height, 255);
    for (int k = 0; k < count; ++k) {
        const char c = upper[static_cast<std::size_t>(k)];
        if (c == ' ') continue;
        const int x0 = spec.margin + (k % spec.per_row) * (cell_w + spec.spacing);
        const int y0 = spec.margin + (k / spec.per_row) * (cell_h + spec.spacing);
        for (int r = 0; r < GlyphFont::kRows; ++r)
            for (int cc = 0; cc < GlyphFont::kCols; ++cc) {
                if (!font.ink(c, r, cc)) continue;
                for (int dy = 0; dy < spec.scale; ++dy)
                    for (int dx = 0; dx < spec.scale; ++dx)
                        img.at(x0 + cc * spec.scale + dx, y0 + r * spec.scale + dy) = 0;
            }
    }
    return img;
}

} // namespace glyphcipher
