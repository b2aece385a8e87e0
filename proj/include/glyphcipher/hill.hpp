#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "glyphcipher/errors.hpp"
#include "glyphcipher/zmod.hpp"

// Hill n-cipher over the 26-letter alphabet: A=1 .. Y=25, Z=0.

namespace glyphcipher {

inline constexpr std::int64_t kAlphabetMod = 26;

// Fixed dummy letter used to pad the last block. The choice is arbitrary
// for the cipher; fixing it keeps round trips deterministic.
inline constexpr char kPadLetter = 'X';

inline std::int64_t letter_to_code(char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalpha(u))
        throw FormatError(std::string("invalid character '") + c + "': only A-Z allowed");
    const char up = static_cast<char>(std::toupper(u));
    return (up - 'A' + 1) % kAlphabetMod; // A->1 .. Y->25, Z->0
}

inline char code_to_letter(std::int64_t v) {
    if (v < 0 || v >= kAlphabetMod)
        throw std::invalid_argument("code_to_letter: value out of [0, 25]");
    return v == 0 ? 'Z' : static_cast<char>('A' + v - 1);
}

// Upcases, strips spaces, rejects anything else.
inline std::string sanitize_letters(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ' ') continue;
        const unsigned char u = static_cast<unsigned char>(c);
        if (!std::isalpha(u))
            throw FormatError(std::string("invalid character '") + c + "': only A-Z and space allowed");
        out.push_back(static_cast<char>(std::toupper(u)));
    }
    return out;
}

// Sanitized text as codes, padded with the dummy letter to a multiple of
// the block size. An empty message stays empty.
inline std::vector<std::int64_t> prepare_plaintext(std::string_view text, int block) {
    if (block < 1) throw std::invalid_argument("prepare_plaintext: block size must be >= 1");
    const std::string clean = sanitize_letters(text);
    std::vector<std::int64_t> codes;
    codes.reserve(clean.size() + block);
    for (char c : clean) codes.push_back(letter_to_code(c));
    if (!codes.empty())
        while (codes.size() % block != 0) codes.push_back(letter_to_code(kPadLetter));
    return codes;
}

// An invertible key matrix mod 26 with its inverse cached at construction.
class HillKey {
public:
    explicit HillKey(ModMatrix matrix)
        : matrix_(std::move(matrix)), inverse_(make_inverse(matrix_)) {}

    // Deterministic rejection sampling: uniform matrices over Z26 until the
    // determinant is a unit. About a third of draws succeed, so the draw
    // bound is never reached in practice.
    static HillKey generate(int n, std::uint64_t seed) {
        if (n < 1 || n > kMaxMatrixDim)
            throw std::invalid_argument("HillKey::generate: dimension must be in [1, 16]");
        std::mt19937_64 rng(seed);
        for (int draw = 0; draw < 10000; ++draw) {
            std::vector<std::int64_t> entries(static_cast<std::size_t>(n) * n);
            for (auto& e : entries) e = static_cast<std::int64_t>(rng() % kAlphabetMod);
            ModMatrix m(n, kAlphabetMod, std::move(entries));
            if (reciprocal_mod(mat_det_mod(m), kAlphabetMod)) return HillKey(std::move(m));
        }
        throw Error("HillKey::generate: no invertible matrix after 10000 draws");
    }

    int dim() const { return matrix_.dim(); }
    const ModMatrix& matrix() const { return matrix_; }
    const ModMatrix& inverse() const { return inverse_; }

private:
    static ModMatrix make_inverse(const ModMatrix& m) {
        if (m.modulus() != kAlphabetMod)
            throw std::invalid_argument("HillKey: modulus must be 26");
        auto inv = mat_inverse_mod(m);
        if (!inv) {
            const std::int64_t det = mat_det_mod(m);
            const std::int64_t g = std::gcd(det, kAlphabetMod);
            std::ostringstream msg;
            msg << "key not invertible mod 26: det mod 26 = " << det
                << " shares factor " << g << " with 26";
            throw NotInvertibleError(msg.str());
        }
        return *std::move(inv);
    }

    ModMatrix matrix_;
    ModMatrix inverse_;
};

namespace detail {
inline std::string apply_blockwise(const ModMatrix& m, const std::vector<std::int64_t>& codes) {
    const int n = m.dim();
    std::string out;
    out.reserve(codes.size());
    for (std::size_t i = 0; i < codes.size(); i += n) {
        const auto block = mat_mul_vec_mod(m, std::span(codes).subspan(i, n));
        for (std::int64_t v : block) out.push_back(code_to_letter(v));
    }
    return out;
}
} // namespace detail

// c = A p (mod 26), blockwise over the padded plaintext.
inline std::string encrypt(std::string_view text, const HillKey& key) {
    return detail::apply_blockwise(key.matrix(), prepare_plaintext(text, key.dim()));
}

// p = A^-1 c (mod 26). Returns the padded plaintext; pad letters are
// indistinguishable from content, so none are stripped.
inline std::string decrypt(std::string_view cipher, const HillKey& key) {
    const std::string clean = sanitize_letters(cipher);
    if (clean.size() % key.dim() != 0)
        throw FormatError("ciphertext length " + std::to_string(clean.size()) +
                          " is not a multiple of block size " + std::to_string(key.dim()));
    std::vector<std::int64_t> codes;
    codes.reserve(clean.size());
    for (char c : clean) codes.push_back(letter_to_code(c));
    return detail::apply_blockwise(key.inverse(), codes);
}

// Key file: line 1 "n 26", then n rows of n entries in [0, 26).
inline void save_key(const HillKey& key, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open key file for writing: " + path.string());
    const int n = key.dim();
    out << n << ' ' << kAlphabetMod << '\n';
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out << (c ? " " : "") << key.matrix().at(r, c);
        out << '\n';
    }
    if (!out) throw FormatError("failed writing key file: " + path.string());
}

// Parses the matrix without the invertibility gate (format checks only).
inline ModMatrix load_key_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open key file: " + path.string());
    int n = 0;
    std::int64_t modulus = 0;
    if (!(in >> n >> modulus))
        throw FormatError("key file " + path.string() + ": missing 'n 26' header");
    if (n < 1 || n > kMaxMatrixDim)
        throw FormatError("key file " + path.string() + ": dimension must be in [1, 16]");
    if (modulus != kAlphabetMod)
        throw FormatError("key file " + path.string() + ": modulus must be 26");
    std::vector<std::int64_t> entries(static_cast<std::size_t>(n) * n);
    for (auto& e : entries) {
        if (!(in >> e))
            throw FormatError("key file " + path.string() + ": expected " +
                              std::to_string(entries.size()) + " matrix entries");
        if (e < 0 || e >= kAlphabetMod)
            throw FormatError("key file " + path.string() + ": entry " + std::to_string(e) +
                              " out of [0, 26)");
    }
    return ModMatrix(n, kAlphabetMod, std::move(entries));
}

// Rejects malformed files, out-of-range entries, and non-invertible
// matrices (the latter with the det-shares-factor diagnostic).
inline HillKey load_key(const std::filesystem::path& path) {
    return HillKey(load_key_matrix(path));
}

} // namespace glyphcipher
