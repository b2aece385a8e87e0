#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glyphcipher/errors.hpp"
#include "glyphcipher/raster.hpp"

// Binary image chain: threshold, edge, dilate, fill, label, boxes,
// reading order, tight crop, 5x7 block features.

namespace glyphcipher {

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 1 = foreground ink

    BinaryImage() = default;
    BinaryImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("BinaryImage: dimensions must be >= 1");
    }

    std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }

    int ink_count() const {
        int n = 0;
        for (std::uint8_t b : bits) n += b;
        return n;
    }

    bool operator==(const BinaryImage&) const = default;
};

// Bounding box of one labeled glyph. reading_index is -1 until
// reading_order assigns it.
struct GlyphBox {
    int x = 0, y = 0; // top-left pixel
    int w = 0, h = 0;
    int label = 0;
    int reading_index = -1;

    double center_y() const { return y + h / 2.0; }
};

// 5x7 block-occupancy descriptor, row-major (7 rows of 5), values in [0, 1].
inline constexpr int kFeatureCols = 5;
inline constexpr int kFeatureRows = 7;
inline constexpr int kFeatureCount = kFeatureCols * kFeatureRows;
using FeatureVector = std::array<double, kFeatureCount>;

// Normalized glyph size before block pooling: 10x10 pixels per feature cell.
inline constexpr int kNormGlyphW = 50;
inline constexpr int kNormGlyphH = 70;
inline constexpr double kDefaultBlockFill = 0.5;

// Threshold maximizing between-class variance of the 256-bin histogram,
// classes {p <= t} and {p > t}; ties go to the lowest level. A constant
// image degenerates to the constant itself (binarize then yields no ink).
inline int otsu_threshold(const GrayImage& img) {
    std::array<std::int64_t, 256> hist{};
    for (std::uint8_t p : img.pixels) ++hist[p];

    const auto [lo, hi] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    if (*lo == *hi) return *lo;

    const std::int64_t total = static_cast<std::int64_t>(img.pixels.size());
    std::int64_t sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<std::int64_t>(v) * hist[v];

    int best_level = 0;
    double best_var = -1.0;
    std::int64_t w0 = 0, sum0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<std::int64_t>(t) * hist[t];
        const std::int64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = static_cast<double>(sum0) / static_cast<double>(w0);
        const double mu1 = static_cast<double>(sum_all - sum0) / static_cast<double>(w1);
        const double var = static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_level = t;
        }
    }
    return best_level;
}

// Splits at the level, then assigns ink = the minority class so that the
// output is foreground-as-1 regardless of whether the scene is dark text
// on light or the reverse. A tie keeps the dark class as ink.
inline BinaryImage binarize(const GrayImage& img, int level) {
    if (level < 0 || level > 255) throw std::invalid_argument("binarize: level out of [0, 255]");
    std::int64_t low = 0;
    for (std::uint8_t p : img.pixels)
        if (p <= level) ++low;
    const std::int64_t high = static_cast<std::int64_t>(img.pixels.size()) - low;
    const bool ink_is_low = low <= high;

    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const bool is_low = img.pixels[i] <= level;
        out.bits[i] = (is_low == ink_is_low) ? 1 : 0;
    }
    return out;
}

// 3x3 Sobel gradient on the 0/1 bits with replicated-edge padding;
// a pixel is an edge iff either component is nonzero.
inline BinaryImage sobel_edges(const BinaryImage& img) {
    static constexpr int gx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static constexpr int gy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    BinaryImage out(img.width, img.height);
    auto clamped = [&](int x, int y) {
        x = std::clamp(x, 0, img.width - 1);
        y = std::clamp(y, 0, img.height - 1);
        return static_cast<int>(img.at(x, y));
    };
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int sx = 0, sy = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int v = clamped(x + dx, y + dy);
                    sx += gx[dy + 1][dx + 1] * v;
                    sy += gy[dy + 1][dx + 1] * v;
                }
            out.at(x, y) = (sx != 0 || sy != 0) ? 1 : 0;
        }
    return out;
}

// Dilation with a 2x2 square structuring element anchored at its
// top-left cell: output(x,y) covers input(x,y), (x-1,y), (x,y-1), (x-1,y-1).
inline BinaryImage dilate(const BinaryImage& img) {
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::uint8_t v = img.at(x, y);
            if (x > 0) v |= img.at(x - 1, y);
            if (y > 0) v |= img.at(x, y - 1);
            if (x > 0 && y > 0) v |= img.at(x - 1, y - 1);
            out.at(x, y) = v;
        }
    return out;
}

// Background 4-connected to the image border survives; every other
// background pixel becomes foreground.
inline BinaryImage fill_holes(const BinaryImage& img) {
    std::vector<std::uint8_t> border_bg(img.bits.size(), 0);
    std::deque<std::pair<int, int>> queue;
    auto push = [&](int x, int y) {
        const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
        if (img.bits[i] == 0 && !border_bg[i]) {
            border_bg[i] = 1;
            queue.emplace_back(x, y);
        }
    };
    for (int x = 0; x < img.width; ++x) {
        push(x, 0);
        push(x, img.height - 1);
    }
    for (int y = 0; y < img.height; ++y) {
        push(0, y);
        push(img.width - 1, y);
    }
    while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        if (x > 0) push(x - 1, y);
        if (x + 1 < img.width) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y + 1 < img.height) push(x, y + 1);
    }
    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.bits.size(); ++i)
        out.bits[i] = (img.bits[i] != 0 || !border_bg[i]) ? 1 : 0;
    return out;
}

struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<int> labels; // 0 = background, components are 1..count
    int count = 0;

    int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

// 8-connectivity labeling; label ids follow raster-scan first encounter.
inline LabelImage label_components(const BinaryImage& img) {
    LabelImage out{img.width, img.height, std::vector<int>(img.bits.size(), 0), 0};
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            if (img.bits[i] == 0 || out.labels[i] != 0) continue;
            const int label = ++out.count;
            out.labels[i] = label;
            queue.emplace_back(x, y);
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * img.width + nx;
                        if (img.bits[ni] != 0 && out.labels[ni] == 0) {
                            out.labels[ni] = label;
                            queue.emplace_back(nx, ny);
                        }
                    }
            }
        }
    return out;
}

// One box per label, ordered by label id.
inline std::vector<GlyphBox> bounding_boxes(const LabelImage& labels) {
    struct Extent {
        int min_x, min_y, max_x, max_y;
        bool seen = false;
    };
    std::vector<Extent> ext(static_cast<std::size_t>(labels.count) + 1);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x) {
            const int l = labels.at(x, y);
            if (l == 0) continue;
            auto& e = ext[static_cast<std::size_t>(l)];
            if (!e.seen) {
                e = {x, y, x, y, true};
            } else {
                e.min_x = std::min(e.min_x, x);
                e.min_y = std::min(e.min_y, y);
                e.max_x = std::max(e.max_x, x);
                e.max_y = std::max(e.max_y, y);
            }
        }
    std::vector<GlyphBox> boxes;
    boxes.reserve(static_cast<std::size_t>(labels.count));
    for (int l = 1; l <= labels.count; ++l) {
        const auto& e = ext[static_cast<std::size_t>(l)];
        boxes.push_back({e.min_x, e.min_y, e.max_x - e.min_x + 1, e.max_y - e.min_y + 1, l, -1});
    }
    return boxes;
}

// Rows by vertical-center clustering (same row iff centers differ by less
// than half the median box height), top-to-bottom, then left-to-right
// within a row. Assigns reading_index 0..k-1.
inline std::vector<GlyphBox> reading_order(std::vector<GlyphBox> boxes) {
    if (boxes.empty()) return boxes;
    std::vector<int> heights;
    heights.reserve(boxes.size());
    for (const auto& b : boxes) heights.push_back(b.h);
    std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
    const double half_median = heights[heights.size() / 2] / 2.0;

    std::stable_sort(boxes.begin(), boxes.end(), [](const GlyphBox& a, const GlyphBox& b) {
        return a.center_y() < b.center_y();
    });
    std::vector<std::vector<GlyphBox>> bands;
    for (const auto& b : boxes) {
        if (bands.empty() || b.center_y() - bands.back().front().center_y() >= half_median)
            bands.emplace_back();
        bands.back().push_back(b);
    }
    std::vector<GlyphBox> out;
    out.reserve(boxes.size());
    for (auto& band : bands) {
        std::stable_sort(band.begin(), band.end(),
                         [](const GlyphBox& a, const GlyphBox& b) { return a.x < b.x; });
        for (auto& b : band) {
            b.reading_index = static_cast<int>(out.size());
            out.push_back(b);
        }
    }
    return out;
}

// Minimal sub-image holding all ink inside the box; ink touches all four
// borders of the result.
inline BinaryImage crop_tight(const BinaryImage& img, const GlyphBox& box) {
    if (box.x < 0 || box.y < 0 || box.w < 1 || box.h < 1 || box.x + box.w > img.width ||
        box.y + box.h > img.height)
        throw std::invalid_argument("crop_tight: box outside image bounds");
    int min_x = img.width, min_y = img.height, max_x = -1, max_y = -1;
    for (int y = box.y; y < box.y + box.h; ++y)
        for (int x = box.x; x < box.x + box.w; ++x)
            if (img.at(x, y)) {
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
    if (max_x < 0) throw FormatError("crop_tight: empty glyph (no ink inside box)");
    BinaryImage out(max_x - min_x + 1, max_y - min_y + 1);
    for (int y = min_y; y <= max_y; ++y)
        for (int x = min_x; x <= max_x; ++x) out.at(x - min_x, y - min_y) = img.at(x, y);
    return out;
}

// Nearest-neighbor resample to 50x70, then 35 block-occupancy bits:
// feature = 1 iff the 10x10 block's ink fraction reaches block_fill.
// Integer-only resampling is exact on scale-10 renders.
inline FeatureVector extract_features(const BinaryImage& glyph,
                                      double block_fill = kDefaultBlockFill) {
    if (glyph.ink_count() == 0) throw FormatError("extract_features: empty glyph");
    BinaryImage norm(kNormGlyphW, kNormGlyphH);
    for (int y = 0; y < kNormGlyphH; ++y) {
        const int sy = y * glyph.height / kNormGlyphH;
        for (int x = 0; x < kNormGlyphW; ++x) {
            const int sx = x * glyph.width / kNormGlyphW;
            norm.at(x, y) = glyph.at(sx, sy);
        }
    }
    FeatureVector features{};
    constexpr int block = kNormGlyphW / kFeatureCols; // 10
    for (int fr = 0; fr < kFeatureRows; ++fr)
        for (int fc = 0; fc < kFeatureCols; ++fc) {
            int ink = 0;
            for (int dy = 0; dy < block; ++dy)
                for (int dx = 0; dx < block; ++dx) ink += norm.at(fc * block + dx, fr * block + dy);
            const double fraction = static_cast<double>(ink) / (block * block);
            features[static_cast<std::size_t>(fr) * kFeatureCols + fc] =
                fraction >= block_fill ? 1.0 : 0.0;
        }
    return features;
}

// Options for the glyph chain. `direct` labels the binarized ink as-is;
// the default runs the literal edge -> dilate -> fill route first.
// A dump directory receives each intermediate stage as a P5 file.
struct ChainOptions {
    bool direct = false;
    double block_fill = kDefaultBlockFill;
    std::optional<std::filesystem::path> dump_dir;
};

struct SegmentedGlyph {
    GlyphBox box;           // from the labeled mask, in reading order
    BinaryImage crop;       // tight ink crop
    FeatureVector features;
};

namespace detail {
inline void dump_stage(const ChainOptions& opts, const std::string& name, const BinaryImage& img) {
    if (!opts.dump_dir) return;
    GrayImage gray(img.width, img.height);
    for (std::size_t i = 0; i < img.bits.size(); ++i) gray.pixels[i] = img.bits[i] ? 0 : 255;
    write_image(gray, *opts.dump_dir / ("stage_" + name + ".pgm"));
}
} // namespace detail

// Full chain on a grayscale image; glyphs come back in reading order.
// Boxes are located on the (possibly dilated) mask, but crops and
// features always come from the binarized ink itself.
inline std::vector<SegmentedGlyph> segment_glyphs(const GrayImage& img,
                                                  const ChainOptions& opts = {}) {
    const int level = otsu_threshold(img);
    const BinaryImage ink = binarize(img, level);
    detail::dump_stage(opts, "binary", ink);

    BinaryImage mask = ink;
    if (!opts.direct) {
        mask = sobel_edges(ink);
        detail::dump_stage(opts, "edges", mask);
        mask = dilate(mask);
        detail::dump_stage(opts, "dilated", mask);
        mask = fill_holes(mask);
        detail::dump_stage(opts, "filled", mask);
    }

    const LabelImage labels = label_components(mask);
    const std::vector<GlyphBox> boxes = reading_order(bounding_boxes(labels));

    std::vector<SegmentedGlyph> out;
    out.reserve(boxes.size());
    for (const auto& box : boxes) {
        BinaryImage crop = crop_tight(ink, box);
        FeatureVector f = extract_features(crop, opts.block_fill);
        out.push_back({box, std::move(crop), f});
    }
    return out;
}

} // namespace glyphcipher
