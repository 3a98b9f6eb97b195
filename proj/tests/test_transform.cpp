#include <doctest.h>

#include <fnt/transform.hpp>

#include "oracles.hpp"

using fnt::Gf;
using fnt::SymbolVector;

namespace {

SymbolVector random_vector(Eigen::Index n, std::mt19937_64& gen) {
    SymbolVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Gf(oracle::uniform(gen, oracle::P));
    return v;
}

std::vector<std::uint64_t> to_ints(const SymbolVector& v) {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i].value();
    return out;
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("bit_reverse") {
    for (unsigned u : {1u, 3u, 8u, 16u}) CHECK(fnt::bit_reverse(0, u) == 0);
    CHECK(fnt::bit_reverse(1, 3) == 4);  // 001 -> 100
    CHECK(fnt::bit_reverse(6, 3) == 3);  // 110 -> 011
    CHECK_THROWS_AS((void)fnt::bit_reverse(8, 3), std::domain_error);
    CHECK_THROWS_AS((void)fnt::bit_reverse(0, 17), std::domain_error);

    auto gen = oracle::rng(0x5eed0101);
    for (int t = 0; t < 2000; ++t) {
        const unsigned u = 1 + static_cast<unsigned>(oracle::uniform(gen, 16));
        const auto i = static_cast<std::uint32_t>(oracle::uniform(gen, std::uint64_t(1) << u));
        CHECK(fnt::bit_reverse(i, u) == oracle::bitrev(i, u));
        CHECK(fnt::bit_reverse(fnt::bit_reverse(i, u), u) == i);
    }
}

TEST_CASE("dft_direct on pinned inputs") {
    SymbolVector delta = SymbolVector::Zero(8);
    delta[0] = Gf(1);
    const SymbolVector flat = fnt::dft_direct(delta);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(flat[i].value() == 1);

    SymbolVector e1 = SymbolVector::Zero(4);
    e1[1] = Gf(1);
    const SymbolVector spectrum = fnt::dft_direct(e1);
    // (1, w, w^2, w^3) with w = 3^16384 = 65281; w^2 = -1, w^3 = -w = 256.
    CHECK(spectrum[0].value() == 1);
    CHECK(spectrum[1].value() == 65281);
    CHECK(spectrum[2].value() == 65536);
    CHECK(spectrum[3].value() == 256);
}

TEST_CASE("dft_direct matches the wide-integer oracle") {
    auto gen = oracle::rng(0x5eed0102);
    for (int t = 0; t < 50; ++t) {
        const SymbolVector a = random_vector(8, gen);
        CHECK(to_ints(fnt::dft_direct(a)) == oracle::dft(to_ints(a)));
    }
}

TEST_CASE("fnt_forward on pinned inputs") {
    SymbolVector pair(2);
    pair << Gf(5), Gf(3);
    const SymbolVector out = fnt::fnt_forward(pair);
    CHECK(out[0].value() == 8);
    CHECK(out[1].value() == 2);

    SymbolVector delta = SymbolVector::Zero(8);
    delta[0] = Gf(1);
    const SymbolVector flat = fnt::fnt_forward(delta);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(flat[i].value() == 1);
}

TEST_CASE("fnt_forward equals dft_direct and the oracle") {
    auto gen = oracle::rng(0x5eed0103);
    for (Eigen::Index n = 2; n <= 64; n *= 2) {
        for (int t = 0; t < 50; ++t) {
            const SymbolVector a = random_vector(n, gen);
            const SymbolVector fast = fnt::fnt_forward(a);
            CHECK(fnt::exact_equal(fast, fnt::dft_direct(a)));
            CHECK(to_ints(fast) == oracle::dft(to_ints(a)));
        }
    }
}

TEST_CASE("fnt_inverse on pinned inputs") {
    SymbolVector ones = SymbolVector::Constant(4, Gf(1));
    const SymbolVector delta = fnt::fnt_inverse(ones);
    CHECK(delta[0].value() == 1);
    for (Eigen::Index i = 1; i < 4; ++i) CHECK(delta[i].value() == 0);

    SymbolVector pair(2);
    pair << Gf(8), Gf(2);
    const SymbolVector back = fnt::fnt_inverse(pair);
    CHECK(back[0].value() == 5);
    CHECK(back[1].value() == 3);
}

TEST_CASE("roundtrip identity up to n = 4096") {
    auto gen = oracle::rng(0x5eed0104);
    for (Eigen::Index n = 2; n <= 4096; n *= 2) {
        const SymbolVector a = random_vector(n, gen);
        CHECK(fnt::exact_equal(fnt::fnt_inverse(fnt::fnt_forward(a)), a));
    }
}

TEST_CASE("inverse matches the oracle idft") {
    auto gen = oracle::rng(0x5eed0105);
    for (int t = 0; t < 20; ++t) {
        const SymbolVector a = random_vector(16, gen);
        CHECK(to_ints(fnt::fnt_inverse(a)) == oracle::idft(to_ints(a)));
    }
}

TEST_CASE("linearity") {
    auto gen = oracle::rng(0x5eed0106);
    for (int t = 0; t < 50; ++t) {
        const Gf alpha{oracle::uniform(gen, oracle::P)};
        const Gf beta{oracle::uniform(gen, oracle::P)};
        const SymbolVector a = random_vector(32, gen);
        const SymbolVector b = random_vector(32, gen);
        const SymbolVector lhs = fnt::fnt_forward(alpha * a + beta * b);
        const SymbolVector rhs = alpha * fnt::fnt_forward(a) + beta * fnt::fnt_forward(b);
        CHECK(fnt::exact_equal(lhs, rhs));
    }
}

TEST_CASE("bad lengths are rejected") {
    for (Eigen::Index n : {0, 1, 3, 12, 100}) {
        SymbolVector v = SymbolVector::Zero(n);
        CHECK_THROWS_AS((void)fnt::fnt_forward(v), std::domain_error);
        CHECK_THROWS_AS((void)fnt::fnt_inverse(v), std::domain_error);
        CHECK_THROWS_AS((void)fnt::dft_direct(v), std::domain_error);
    }
}

}  // TEST_SUITE
