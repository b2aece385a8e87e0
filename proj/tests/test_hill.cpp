#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <random>

#include "glyphcipher/hill.hpp"

using namespace glyphcipher;

namespace {

HillKey paper_key() { return HillKey(ModMatrix(2, 26, {1, 2, 0, 3})); }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string random_letters(std::mt19937_64& rng, std::size_t len, bool spaces) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        if (spaces && rng() % 7 == 0)
            s.push_back(' ');
        else
            s.push_back(static_cast<char>('A' + rng() % 26));
    }
    return s;
}

} // namespace

TEST_CASE("letter codes follow the shifted alphabet") {
    CHECK(letter_to_code('H') == 8);
    CHECK(letter_to_code('Z') == 0);
    CHECK(letter_to_code('A') == 1);
    CHECK(letter_to_code('h') == 8);
    CHECK(code_to_letter(18) == 'R');
    CHECK(code_to_letter(0) == 'Z');
    for (char c = 'A'; c <= 'Z'; ++c) CHECK(code_to_letter(letter_to_code(c)) == c);
    for (int v = 0; v < 26; ++v) CHECK(letter_to_code(code_to_letter(v)) == v);
    CHECK_THROWS_AS(letter_to_code('4'), FormatError);
    CHECK_THROWS_AS(letter_to_code(' '), FormatError);
    CHECK_THROWS_AS(code_to_letter(26), std::invalid_argument);
    CHECK_THROWS_AS(code_to_letter(-1), std::invalid_argument);
}

TEST_CASE("prepare_plaintext strips spaces, upcases, pads with X") {
    CHECK(prepare_plaintext("HELP ME", 2) == std::vector<std::int64_t>{8, 5, 12, 16, 13, 5});
    CHECK(prepare_plaintext("", 2).empty());
    CHECK(prepare_plaintext("ABC", 2) == std::vector<std::int64_t>{1, 2, 3, 24});
    CHECK(prepare_plaintext("abcd", 3) == std::vector<std::int64_t>{1, 2, 3, 4, 24, 24});
    CHECK_THROWS_AS(prepare_plaintext("HELP!", 2), FormatError);
    CHECK_THROWS_AS(prepare_plaintext("A", 0), std::invalid_argument);
}

TEST_CASE("the worked 2x2 demo encrypts and decrypts exactly") {
    const HillKey key = paper_key();
    CHECK(key.inverse() == ModMatrix(2, 26, {1, 8, 0, 9}));
    CHECK(encrypt("HELPME", key) == "RORVWO");
    CHECK(encrypt("HELP ME", key) == "RORVWO");
    CHECK(decrypt("RORVWO", key) == "HELPME");
    CHECK(decrypt("RV", key) == "LP");
}

TEST_CASE("identity key leaves sanitized padded text unchanged") {
    const HillKey id(ModMatrix::identity(2, 26));
    CHECK(encrypt("HELP ME", id) == "HELPME");
    CHECK(encrypt("ODD", id) == "ODDX");
}

TEST_CASE("3x3 key matches an independent blockwise oracle") {
    const HillKey key(ModMatrix(3, 26, {1, 1, 0, 0, 1, 1, 0, 0, 1}));
    // oracle: multiply each code triple by hand, reduce, map back
    const std::vector<std::int64_t> codes = prepare_plaintext("HELPME", 3);
    std::string expect;
    for (std::size_t i = 0; i < codes.size(); i += 3) {
        const std::int64_t c0 = (codes[i] + codes[i + 1]) % 26;
        const std::int64_t c1 = (codes[i + 1] + codes[i + 2]) % 26;
        const std::int64_t c2 = codes[i + 2] % 26;
        expect += code_to_letter(c0);
        expect += code_to_letter(c1);
        expect += code_to_letter(c2);
    }
    CHECK(expect == "MQLCRE");
    CHECK(encrypt("HELPME", key) == expect);
    CHECK(decrypt(encrypt("HELPME", key), key) == "HELPME");
}

TEST_CASE("decrypt validates its input") {
    const HillKey key = paper_key();
    CHECK_THROWS_AS(decrypt("ROR", key), FormatError);   // not a multiple of 2
    CHECK_THROWS_AS(decrypt("R2", key), FormatError);    // invalid character
    CHECK(decrypt("", key).empty());
}

TEST_CASE("round trip equals the padded plaintext for random keys") {
    std::mt19937_64 rng(101);
    for (int round = 0; round < 60; ++round) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const HillKey key = HillKey::generate(n, rng());
        const std::string text = random_letters(rng, 1 + rng() % 60, true);
        const std::vector<std::int64_t> padded = prepare_plaintext(text, n);
        std::string padded_letters;
        for (std::int64_t c : padded) padded_letters += code_to_letter(c);
        CHECK(decrypt(encrypt(text, key), key) == padded_letters);
    }
}

TEST_CASE("non-identity keys change letter frequencies") {
    std::mt19937_64 rng(5);
    const std::string sample = random_letters(rng, 1000, false);
    const std::string cipher = encrypt(sample, paper_key());
    std::array<int, 26> plain_freq{}, cipher_freq{};
    for (char c : sample) ++plain_freq[static_cast<std::size_t>(c - 'A')];
    for (char c : cipher) ++cipher_freq[static_cast<std::size_t>(c - 'A')];
    CHECK(plain_freq != cipher_freq);
}

TEST_CASE("keygen is deterministic and always invertible") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 999ull}) {
        const HillKey a = HillKey::generate(2, seed);
        const HillKey b = HillKey::generate(2, seed);
        CHECK(a.matrix() == b.matrix());
        CHECK(std::gcd(mat_det_mod(a.matrix()), std::int64_t{26}) == 1);
    }
    CHECK(HillKey::generate(2, 1).matrix() != HillKey::generate(2, 2).matrix());
    CHECK_THROWS_AS(HillKey::generate(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(HillKey::generate(17, 1), std::invalid_argument);
}

TEST_CASE("exactly 157248 of the 456976 matrices mod 26 are invertible") {
    // |GL2(Z26)| = |GL2(Z2)| * |GL2(Z13)| = 6 * 168 * 156
    long invertible = 0;
    for (std::int64_t a = 0; a < 26; ++a)
        for (std::int64_t b = 0; b < 26; ++b)
            for (std::int64_t c = 0; c < 26; ++c)
                for (std::int64_t d = 0; d < 26; ++d)
                    if (std::gcd(mod_reduce(a * d - b * c, 26), std::int64_t{26}) == 1)
                        ++invertible;
    CHECK(invertible == 157248);
}

TEST_CASE("rejecting a non-invertible key names the shared factor") {
    try {
        HillKey key(ModMatrix(2, 26, {2, 0, 0, 1}));
        FAIL("expected NotInvertibleError");
    } catch (const NotInvertibleError& e) {
        CHECK(std::string(e.what()).find("shares factor 2 with 26") != std::string::npos);
    }
    CHECK_THROWS_AS(HillKey(ModMatrix(2, 26, {13, 0, 0, 1})), NotInvertibleError);
}

TEST_CASE("key files round trip and reject bad content") {
    const auto path = temp_file("gc_key_roundtrip.txt");
    const HillKey key = HillKey::generate(3, 7);
    save_key(key, path);
    const HillKey loaded = load_key(path);
    CHECK(loaded.matrix() == key.matrix());
    CHECK(loaded.inverse() == key.inverse());

    auto write_file = [](const std::filesystem::path& p, const std::string& body) {
        std::ofstream out(p);
        out << body;
    };
    const auto bad = temp_file("gc_key_bad.txt");

    write_file(bad, "2 26\n1 2\n0\n");
    CHECK_THROWS_AS(load_key(bad), FormatError); // missing entry
    write_file(bad, "2 25\n1 2\n0 3\n");
    CHECK_THROWS_AS(load_key(bad), FormatError); // wrong modulus
    write_file(bad, "2 26\n1 27\n0 3\n");
    CHECK_THROWS_AS(load_key(bad), FormatError); // entry out of range
    write_file(bad, "nonsense\n");
    CHECK_THROWS_AS(load_key(bad), FormatError);
    write_file(bad, "2 26\n2 0\n0 1\n");
    CHECK_THROWS_AS(load_key(bad), NotInvertibleError);
    CHECK_THROWS_AS(load_key(temp_file("gc_key_missing_file.txt")), FormatError);

    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}
