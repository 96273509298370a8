#pragma once

// Test-only brute-force oracle for the Hilbert symbol over Q_p, p odd.
//
// For coefficient valuations <= 1, z^2 = a x^2 + b y^2 is solvable over Q_p
// exactly when it has a solution mod p^3 with one coordinate equal to 1:
// a primitive solution mod p^3 forces some gradient coordinate (2ax, 2by, 2z)
// to have valuation <= 1, and then 3 > 2*1 certifies a Hensel lift.

#include <cstdint>
#include <vector>

namespace oracle {

inline int hilbert_brute(int64_t p, int64_t a, int64_t b) {
    const int64_t M = p * p * p;
    auto norm = [&](int64_t v) { return ((v % M) + M) % M; };
    a = norm(a);
    b = norm(b);
    std::vector<char> sq(M, 0);
    for (int64_t z = 0; z < M; ++z) sq[(z * z) % M] = 1;
    // x = 1: z^2 = a + b y^2
    for (int64_t y = 0; y < M; ++y)
        if (sq[norm(a + b * ((y * y) % M))]) return 1;
    // y = 1: z^2 = a x^2 + b
    for (int64_t x = 0; x < M; ++x)
        if (sq[norm(b + a * ((x * x) % M))]) return 1;
    // z = 1: 1 = a x^2 + b y^2
    std::vector<char> av(M, 0);
    for (int64_t x = 0; x < M; ++x) av[norm(a * ((x * x) % M))] = 1;
    for (int64_t y = 0; y < M; ++y)
        if (av[norm(1 - b * ((y * y) % M))]) return 1;
    return -1;
}

inline int64_t least_nonresidue(int64_t p) {
    auto chi = [&](int64_t v) {
        int64_t r = 1, base = v % p, e = (p - 1) / 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    for (int64_t u = 2; u < p; ++u)
        if (chi(u) == p - 1) return u;
    return 0;
}

} // namespace oracle
