#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

#include "glyphcipher/zmod.hpp"

using namespace glyphcipher;

namespace {

// Independent determinant oracle: plain integer cofactor expansion along
// the first row, reduced only at the end. Written out per dimension so it
// shares no code path with mat_det_mod.
std::int64_t det1(const ModMatrix& m) { return m.at(0, 0); }
std::int64_t det2(const ModMatrix& m) { return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0); }
std::int64_t det3(const ModMatrix& m) {
    return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
           m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
           m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

ModMatrix random_matrix(int n, std::int64_t mod, std::mt19937_64& rng) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n) * n);
    for (auto& v : e) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(mod));
    return ModMatrix(n, mod, std::move(e));
}

} // namespace

TEST_CASE("mod_reduce canonicalizes into [0, m)") {
    CHECK(mod_reduce(44, 26) == 18);
    CHECK(mod_reduce(0, 26) == 0);
    CHECK(mod_reduce(-18, 26) == 8);
    CHECK(mod_reduce(26, 26) == 0);
    CHECK(mod_reduce(-1, 26) == 25);
    CHECK(mod_reduce(-52, 26) == 0);
}

TEST_CASE("mod_reduce rejects bad moduli") {
    CHECK_THROWS_AS(mod_reduce(5, 1), std::invalid_argument);
    CHECK_THROWS_AS(mod_reduce(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(mod_reduce(5, -7), std::invalid_argument);
    CHECK_THROWS_AS(reciprocal_mod(5, 1), std::invalid_argument);
}

TEST_CASE("mod_reduce is idempotent") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t x = static_cast<std::int64_t>(rng()) % 100000;
        const std::int64_t m = 2 + static_cast<std::int64_t>(rng() % 97);
        const std::int64_t once = mod_reduce(x, m);
        CHECK(mod_reduce(once, m) == once);
        CHECK(once >= 0);
        CHECK(once < m);
    }
}

TEST_CASE("reciprocal_mod matches the mod-26 reciprocal table") {
    const std::array<std::pair<int, int>, 12> table{{{1, 1},
                                                     {3, 9},
                                                     {5, 21},
                                                     {7, 15},
                                                     {9, 3},
                                                     {11, 19},
                                                     {15, 7},
                                                     {17, 23},
                                                     {19, 11},
                                                     {21, 5},
                                                     {23, 17},
                                                     {25, 25}}};
    for (const auto& [a, inv] : table) {
        const auto r = reciprocal_mod(a, 26);
        REQUIRE(r.has_value());
        CHECK(*r == inv);
        CHECK(a * *r % 26 == 1);
    }
    for (int a = 0; a < 26; a += 2) CHECK_FALSE(reciprocal_mod(a, 26).has_value());
    CHECK_FALSE(reciprocal_mod(13, 26).has_value());
    CHECK_FALSE(reciprocal_mod(4, 26).has_value());
}

TEST_CASE("reciprocal_mod is generic in the modulus") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const std::int64_t m = 2 + static_cast<std::int64_t>(rng() % 500);
        const std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m));
        const auto r = reciprocal_mod(a, m);
        if (std::gcd(a, m) == 1) {
            REQUIRE(r.has_value());
            CHECK(a * *r % m == 1);
        } else {
            CHECK_FALSE(r.has_value());
        }
    }
}

TEST_CASE("mat_det_mod worked values") {
    CHECK(mat_det_mod(ModMatrix(2, 26, {1, 2, 0, 3})) == 3);
    CHECK(mat_det_mod(ModMatrix(2, 26, {2, 4, 1, 2})) == 0);
    for (int n : {1, 2, 3, 4, 5}) CHECK(mat_det_mod(ModMatrix::identity(n, 26)) == 1);
}

TEST_CASE("mat_det_mod agrees with cofactor expansion on small matrices") {
    // exhaustive over entries {0..3}; the acceptance suite widens to {0..5}
    const std::int64_t mod = 26;
    for (int n = 1; n <= 3; ++n) {
        const int cells = n * n;
        long total = 1;
        for (int i = 0; i < cells; ++i) total *= 4;
        for (long code = 0; code < total; ++code) {
            std::vector<std::int64_t> e(static_cast<std::size_t>(cells));
            long rest = code;
            for (auto& v : e) {
                v = rest % 4;
                rest /= 4;
            }
            const ModMatrix m(n, mod, e);
            const std::int64_t expect =
                mod_reduce(n == 1 ? det1(m) : n == 2 ? det2(m) : det3(m), mod);
            REQUIRE(mat_det_mod(m) == expect);
        }
    }
}

TEST_CASE("mat_adjugate_mod reproduces the worked 2x2 factor") {
    const ModMatrix m(2, 26, {1, 2, 0, 3});
    const ModMatrix adj = mat_adjugate_mod(m);
    CHECK(adj == ModMatrix(2, 26, {3, 24, 0, 1})); // [3 -2; 0 1] reduced
    CHECK(mat_adjugate_mod(ModMatrix::identity(3, 26)) == ModMatrix::identity(3, 26));
}

TEST_CASE("M * adj(M) = det(M) * I, singular included") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const std::int64_t mod = 2 + static_cast<std::int64_t>(rng() % 40);
        const ModMatrix m = random_matrix(n, mod, rng);
        const std::int64_t det = mat_det_mod(m);
        ModMatrix expect(n, mod);
        for (int i = 0; i < n; ++i) expect.at(i, i) = det;
        CHECK(mat_mul_mod(m, mat_adjugate_mod(m)) == expect);
        CHECK(mat_mul_mod(mat_adjugate_mod(m), m) == expect);
    }
}

TEST_CASE("mat_inverse_mod worked example and identities") {
    const ModMatrix m(2, 26, {1, 2, 0, 3});
    const auto inv = mat_inverse_mod(m);
    REQUIRE(inv.has_value());
    CHECK(*inv == ModMatrix(2, 26, {1, 8, 0, 9}));
    CHECK(mat_mul_mod(m, *inv) == ModMatrix::identity(2, 26));
    CHECK(mat_mul_mod(*inv, m) == ModMatrix::identity(2, 26));
    CHECK(*mat_inverse_mod(ModMatrix::identity(4, 26)) == ModMatrix::identity(4, 26));
}

TEST_CASE("two-sided inverse on random unit-determinant matrices") {
    std::mt19937_64 rng(31);
    int tested = 0;
    while (tested < 80) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const ModMatrix m = random_matrix(n, 26, rng);
        const auto inv = mat_inverse_mod(m);
        if (std::gcd(mat_det_mod(m), std::int64_t{26}) != 1) {
            CHECK_FALSE(inv.has_value());
            continue;
        }
        REQUIRE(inv.has_value());
        CHECK(mat_mul_mod(m, *inv) == ModMatrix::identity(n, 26));
        CHECK(mat_mul_mod(*inv, m) == ModMatrix::identity(n, 26));
        ++tested;
    }
}

TEST_CASE("no candidate inverts a matrix whose det shares a factor with 26") {
    // [[2,0],[0,1]]: exhaustive search over all 2x2 candidates mod 26
    for (std::int64_t b00 = 0; b00 < 26; ++b00)
        for (std::int64_t b01 = 0; b01 < 26; ++b01)
            for (std::int64_t b10 = 0; b10 < 26; ++b10)
                for (std::int64_t b11 = 0; b11 < 26; ++b11) {
                    const bool is_identity = (2 * b00) % 26 == 1 && (2 * b01) % 26 == 0 &&
                                             b10 % 26 == 0 && b11 % 26 == 1;
                    CHECK_FALSE(is_identity);
                }
    CHECK_FALSE(mat_inverse_mod(ModMatrix(2, 26, {2, 0, 0, 1})).has_value());
}

TEST_CASE("mat_mul_vec_mod worked cipher vectors") {
    const ModMatrix a(2, 26, {1, 2, 0, 3});
    CHECK(mat_mul_vec_mod(a, std::vector<std::int64_t>{8, 5}) ==
          std::vector<std::int64_t>{18, 15});
    CHECK(mat_mul_vec_mod(a, std::vector<std::int64_t>{12, 16}) ==
          std::vector<std::int64_t>{18, 22});
    const ModMatrix inv(2, 26, {1, 8, 0, 9});
    CHECK(mat_mul_vec_mod(inv, std::vector<std::int64_t>{18, 15}) ==
          std::vector<std::int64_t>{8, 5});
    CHECK_THROWS_AS(mat_mul_vec_mod(a, std::vector<std::int64_t>{1, 2, 3}),
                    std::invalid_argument);
}

TEST_CASE("ModMatrix validates its construction") {
    CHECK_THROWS_AS(ModMatrix(0, 26), std::invalid_argument);
    CHECK_THROWS_AS(ModMatrix(17, 26), std::invalid_argument);
    CHECK_THROWS_AS(ModMatrix(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModMatrix(2, 26, {1, 2, 3}), std::invalid_argument);
    // entries canonicalize on construction
    CHECK(ModMatrix(2, 26, {-18, 44, 26, -1}) == ModMatrix(2, 26, {8, 18, 0, 25}));
}
