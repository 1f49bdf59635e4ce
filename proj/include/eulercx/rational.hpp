#pragma once
// Exact rational scalars and small helpers shared across the workbench.

#include <gmpxx.h>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eulercx {

using Rat = mpq_class;

inline Rat rat(long n, long d = 1) { Rat r(n, d); r.canonicalize(); return r; }

inline double to_d(const Rat& r) { return r.get_d(); }

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// reduce r into [0,1)
inline Rat mod1(const Rat& r) {
    mpz_class num = r.get_num(), den = r.get_den();
    mpz_class q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Rat out(rem, den);
    out.canonicalize();
    return out;
}

// 64-bit FNV-1a, used for cache keys and canonical hashing of config strings
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { long t = a % b; a = b; b = t; }
    return a;
}

inline long mod_pos(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace eulercx
