#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "glyphcipher/errors.hpp"
#include "glyphcipher/hill.hpp"
#include "glyphcipher/neuralnet.hpp"
#include "glyphcipher/raster.hpp"
#include "glyphcipher/segment.hpp"

// End-to-end orchestration: corpus generation, image OCR, and the full
// image -> recognize -> decrypt chain.

namespace glyphcipher {

// Renders each letter, takes its chain features, then makes `copies`
// samples per letter with each feature value flipped independently with
// probability noise_p. Classes are zero-based alphabet positions.
inline Dataset build_corpus(std::string_view letters, int copies, double noise_p,
                            std::uint64_t seed) {
    if (letters.empty()) throw std::invalid_argument("build_corpus: empty letter set");
    if (copies < 1) throw std::invalid_argument("build_corpus: copies must be >= 1");
    if (noise_p < 0.0 || noise_p >= 0.5)
        throw std::invalid_argument("build_corpus: noise probability must be in [0, 0.5)");

    std::vector<char> unique;
    for (char c : letters) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (!std::isalpha(u))
            throw FormatError(std::string("build_corpus: invalid letter '") + c + "'");
        const char up = static_cast<char>(std::toupper(u));
        if (std::find(unique.begin(), unique.end(), up) == unique.end()) unique.push_back(up);
    }

    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    Dataset data;
    data.inputs.reserve(unique.size() * static_cast<std::size_t>(copies));
    data.targets.reserve(data.inputs.capacity());
    for (char letter : unique) {
        const GrayImage img = render_text(std::string_view(&letter, 1), GlyphFont::builtin());
        const auto glyphs = segment_glyphs(img);
        if (glyphs.size() != 1)
            throw Error("build_corpus: rendered letter did not segment to one glyph");
        const FeatureVector clean = glyphs.front().features;
        for (int copy = 0; copy < copies; ++copy) {
            FeatureVector f = clean;
            if (noise_p > 0.0)
                for (auto& v : f)
                    if (unit() < noise_p) v = 1.0 - v;
            data.inputs.push_back(f);
            data.targets.push_back(one_hot(letter - 'A'));
        }
    }
    return data;
}

struct OcrGlyph {
    GlyphBox box;
    int cls = 0;             // 0..25
    double confidence = 0.0; // max output unit value
};

struct OcrResult {
    std::string text; // one letter per glyph, reading order
    std::vector<OcrGlyph> glyphs;
};

// Segment, extract features, classify; errors when no glyph is found.
inline OcrResult ocr_image(const GrayImage& img, const Mlp& net, const ChainOptions& opts = {}) {
    const auto glyphs = segment_glyphs(img, opts);
    if (glyphs.empty()) throw FormatError("ocr_image: no glyphs found in image");
    OcrResult res;
    res.text.reserve(glyphs.size());
    res.glyphs.reserve(glyphs.size());
    for (const auto& g : glyphs) {
        const Activations act = forward(net, g.features);
        const int cls = argmax_index(act.output);
        res.text.push_back(static_cast<char>('A' + cls));
        res.glyphs.push_back({g.box, cls, act.output[static_cast<std::size_t>(cls)]});
    }
    return res;
}

struct DecodeReport {
    std::string recognized;          // every glyph, reading order
    std::vector<double> confidences; // per recognized glyph
    std::string selected;            // ciphertext slice passed to the cipher
    std::string plaintext;           // padded plaintext of the slice
};

struct DecodeOptions {
    std::size_t skip = 0;                  // glyphs to drop from the front
    std::optional<std::size_t> take;       // glyph count to decode (default: all remaining)
    std::optional<double> min_confidence;  // error on any selected glyph below this
    ChainOptions chain;
};

// OCR the image, slice the selected glyph range, Hill-decrypt the slice.
inline DecodeReport decode_image(const GrayImage& img, const Mlp& net, const HillKey& key,
                                 const DecodeOptions& opts = {}) {
    const OcrResult ocr = ocr_image(img, net, opts.chain);
    const std::size_t total = ocr.text.size();
    if (opts.skip > total)
        throw FormatError("decode_image: skip " + std::to_string(opts.skip) + " exceeds glyph count " +
                          std::to_string(total));
    const std::size_t take = opts.take.value_or(total - opts.skip);
    if (opts.skip + take > total)
        throw FormatError("decode_image: range [" + std::to_string(opts.skip) + ", " +
                          std::to_string(opts.skip + take) + ") exceeds glyph count " +
                          std::to_string(total));
    if (take % static_cast<std::size_t>(key.dim()) != 0)
        throw FormatError("decode_image: selected length " + std::to_string(take) +
                          " is not a multiple of block size " + std::to_string(key.dim()));
    if (opts.min_confidence) {
        for (std::size_t i = opts.skip; i < opts.skip + take; ++i)
            if (ocr.glyphs[i].confidence < *opts.min_confidence)
                throw FormatError("decode_image: glyph " + std::to_string(i) + " confidence " +
                                  std::to_string(ocr.glyphs[i].confidence) + " below threshold");
    }

    DecodeReport report;
    report.recognized = ocr.text;
    report.confidences.reserve(ocr.glyphs.size());
    for (const auto& g : ocr.glyphs) report.confidences.push_back(g.confidence);
    report.selected = ocr.text.substr(opts.skip, take);
    report.plaintext = decrypt(report.selected, key);
    return report;
}

// Encrypt, render the ciphertext, write it as P5.
inline void encrypt_to_image(std::string_view text, const HillKey& key, const RenderSpec& spec,
                             const std::filesystem::path& path) {
    const std::string cipher = encrypt(text, key);
    if (cipher.empty()) throw FormatError("encrypt_to_image: nothing to render");
    write_image(render_text(cipher, GlyphFont::builtin(), spec), path);
}

} // namespace glyphcipher
