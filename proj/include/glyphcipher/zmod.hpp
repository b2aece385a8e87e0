#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "glyphcipher/errors.hpp"

// Integer arithmetic and small-matrix linear algebra over Z_m.
// The cipher layer always uses m = 26, but everything here is generic in m.

namespace glyphcipher {

// Keys are tiny by construction; the cap keeps adjugate costs negligible
// and lets determinants use subset-mask DP.
inline constexpr int kMaxMatrixDim = 16;

// Canonical residue of x in [0, m). Negative inputs map to the
// non-negative representative.
inline std::int64_t mod_reduce(std::int64_t x, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("mod_reduce: modulus must be >= 2");
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

// Multiplicative inverse of a mod m via the extended Euclidean algorithm,
// or nullopt when gcd(a, m) > 1. A non-unit is a domain outcome, not an error.
inline std::optional<std::int64_t> reciprocal_mod(std::int64_t a, std::int64_t m) {
    if (m < 2) throw std::invalid_argument("reciprocal_mod: modulus must be >= 2");
    a = mod_reduce(a, m);
    std::int64_t r0 = m, r1 = a;
    std::int64_t s0 = 0, s1 = 1; // coefficients of a
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) return std::nullopt;
    return mod_reduce(s0, m);
}

// Square matrix over Z_m, entries kept canonical in [0, m), row-major.
class ModMatrix {
public:
    ModMatrix(int n, std::int64_t modulus)
        : ModMatrix(n, modulus, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n, 0)) {}

    ModMatrix(int n, std::int64_t modulus, std::vector<std::int64_t> entries)
        : n_(n), modulus_(modulus), entries_(std::move(entries)) {
        if (n < 1 || n > kMaxMatrixDim)
            throw std::invalid_argument("ModMatrix: dimension must be in [1, 16]");
        if (modulus < 2)
            throw std::invalid_argument("ModMatrix: modulus must be >= 2");
        if (entries_.size() != static_cast<std::size_t>(n) * n)
            throw std::invalid_argument("ModMatrix: entry count does not match dimension");
        for (auto& e : entries_) e = mod_reduce(e, modulus_);
    }

    static ModMatrix identity(int n, std::int64_t modulus) {
        ModMatrix m(n, modulus);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1 % modulus;
        return m;
    }

    int dim() const { return n_; }
    std::int64_t modulus() const { return modulus_; }

    std::int64_t at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * n_ + c]; }
    std::int64_t& at(int r, int c) { return entries_[static_cast<std::size_t>(r) * n_ + c]; }

    const std::vector<std::int64_t>& entries() const { return entries_; }

    bool operator==(const ModMatrix&) const = default;

private:
    int n_;
    std::int64_t modulus_;
    std::vector<std::int64_t> entries_;
};

// Determinant mod m by Laplace expansion memoized over column subsets.
// Uses only ring operations, so it is valid for composite m; O(2^n * n).
inline std::int64_t mat_det_mod(const ModMatrix& m) {
    const int n = m.dim();
    const std::int64_t mod = m.modulus();
    std::vector<std::int64_t> dp(std::size_t{1} << n, 0);
    dp[0] = 1 % mod;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int row = std::popcount(mask) - 1;
        std::int64_t acc = 0;
        int pos = 0;
        for (int col = 0; col < n; ++col) {
            if (!(mask >> col & 1u)) continue;
            const std::int64_t term = m.at(row, col) * dp[mask ^ (1u << col)] % mod;
            acc += ((row + pos) & 1) ? -term : term;
            ++pos;
        }
        dp[mask] = mod_reduce(acc, mod);
    }
    return dp[(std::size_t{1} << n) - 1];
}

// Classical adjugate: adj(M)[i][j] = (-1)^(i+j) det(minor of M without row j, col i),
// reduced mod m. Satisfies M * adj(M) = det(M) * I even when det is not a unit.
inline ModMatrix mat_adjugate_mod(const ModMatrix& m) {
    const int n = m.dim();
    const std::int64_t mod = m.modulus();
    ModMatrix adj(n, mod);
    if (n == 1) {
        adj.at(0, 0) = 1 % mod; // det of the empty minor
        return adj;
    }
    ModMatrix minor(n - 1, mod);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int i = 0, mi = 0; i < n; ++i) {
                if (i == r) continue;
                for (int j = 0, mj = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor.at(mi, mj) = m.at(i, j);
                    ++mj;
                }
                ++mi;
            }
            const std::int64_t cof = mat_det_mod(minor);
            adj.at(c, r) = mod_reduce(((r + c) & 1) ? -cof : cof, mod);
        }
    }
    return adj;
}

// Inverse as det^-1 * adj when the determinant residue is a unit,
// nullopt otherwise. Elimination is avoided on purpose: Z_m has
// non-unit pivots for composite m, the adjugate route does not.
inline std::optional<ModMatrix> mat_inverse_mod(const ModMatrix& m) {
    const std::int64_t det = mat_det_mod(m);
    const auto rec = reciprocal_mod(det, m.modulus());
    if (!rec) return std::nullopt;
    ModMatrix inv = mat_adjugate_mod(m);
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c)
            inv.at(r, c) = inv.at(r, c) * *rec % m.modulus();
    return inv;
}

inline std::vector<std::int64_t> mat_mul_vec_mod(const ModMatrix& m,
                                                 std::span<const std::int64_t> v) {
    const int n = m.dim();
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("mat_mul_vec_mod: vector length does not match dimension");
    std::vector<std::int64_t> out(static_cast<std::size_t>(n), 0);
    for (int r = 0; r < n; ++r) {
        std::int64_t acc = 0;
        for (int c = 0; c < n; ++c) acc += m.at(r, c) * mod_reduce(v[c], m.modulus());
        out[r] = mod_reduce(acc, m.modulus());
    }
    return out;
}

inline ModMatrix mat_mul_mod(const ModMatrix& a, const ModMatrix& b) {
    if (a.dim() != b.dim() || a.modulus() != b.modulus())
        throw std::invalid_argument("mat_mul_mod: mismatched operands");
    const int n = a.dim();
    ModMatrix out(n, a.modulus());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::int64_t acc = 0;
            for (int k = 0; k < n; ++k) acc += a.at(r, k) * b.at(k, c) % a.modulus();
            out.at(r, c) = mod_reduce(acc, a.modulus());
        }
    return out;
}

} // namespace glyphcipher
