#pragma once

// Independent reference arithmetic used to pin expected values. Deliberately
// avoids the library types: everything here is plain 64-bit integers reduced
// by %, so a bug in the field layer cannot hide in its own oracle.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline constexpr std::uint64_t P = 65537;

inline std::uint64_t add(std::uint64_t a, std::uint64_t b) { return (a + b) % P; }
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return (a + P - b % P) % P; }
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) { return (a % P) * (b % P) % P; }

inline std::uint64_t pw(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    a %= P;
    while (e) {
        if (e & 1) r = r * a % P;
        a = a * a % P;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t inv(std::uint64_t a) { return pw(a, P - 2); }

inline std::uint64_t bitrev(std::uint64_t i, unsigned bits) {
    std::uint64_t r = 0;
    for (unsigned b = 0; b < bits; ++b) {
        r = (r << 1) | (i & 1);
        i >>= 1;
    }
    return r;
}

inline std::uint64_t root_of_order(std::uint64_t order) { return pw(3, (P - 1) / order); }

inline std::vector<std::uint64_t> dft(const std::vector<std::uint64_t>& a) {
    const std::size_t n = a.size();
    const std::uint64_t w = root_of_order(n);
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc = (acc + a[j] * pw(w, i * j)) % P;
        out[i] = acc;
    }
    return out;
}

inline std::vector<std::uint64_t> idft(const std::vector<std::uint64_t>& a) {
    const std::size_t n = a.size();
    const std::uint64_t w = inv(root_of_order(n));
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc = (acc + a[j] * pw(w, i * j)) % P;
        out[i] = acc * inv(n) % P;
    }
    return out;
}

// Row-reduction rank, written from scratch on plain integers.
inline std::size_t rank(std::vector<std::vector<std::uint64_t>> m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.size() && m[pivot][c] % P == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[r], m[pivot]);
        const std::uint64_t scale = inv(m[r][c]);
        for (std::size_t j = 0; j < cols; ++j) m[r][j] = m[r][j] % P * scale % P;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] % P == 0) continue;
            const std::uint64_t f = m[i][c] % P;
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = (m[i][j] + (P - f) * m[r][j]) % P;
        }
        ++r;
    }
    return r;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::uint64_t uniform(std::mt19937_64& gen, std::uint64_t bound) { return gen() % bound; }

}  // namespace oracle
