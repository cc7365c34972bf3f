#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace twistscan {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Inverse of a modulo m, gcd(a, m) = 1 assumed.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

// Kronecker symbol (a|n) with the standard conventions at 2, -1 and 0.
inline int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int k = 1;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v & 1) {
        long long am = a % 8;
        if (am < 0) am += 8;
        if (am == 3 || am == 5) k = -k;  // (a|2) = -1 for a = +-3 mod 8
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;  // (a|-1)
    }
    // n odd positive: Jacobi loop with reciprocity.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        int v2 = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v2;
        }
        if (v2 & 1) {
            long long nm = n & 7;
            if (nm == 3 || nm == 5) k = -k;
        }
        if ((a & 3) == 3 && (n & 3) == 3) k = -k;
        long long t = a;
        a = n % t;
        n = t;
    }
    return n == 1 ? k : 0;
}

inline int kronecker(const mpz_class& a, const mpz_class& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

// Square root modulo an odd prime p (Tonelli-Shanks).  Returns false when a
// is a non-residue.  a need not be reduced.
inline bool sqrtmod(std::uint64_t a, std::uint64_t p, std::uint64_t& root) {
    a %= p;
    if (a == 0) {
        root = 0;
        return true;
    }
    if (p == 2) {
        root = a;
        return true;
    }
    if (powmod(a, (p - 1) / 2, p) != 1) return false;
    if ((p & 3) == 3) {
        root = powmod(a, (p + 1) / 4, p);
        return true;
    }
    std::uint64_t q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    std::uint64_t m = s;
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t t = powmod(a, q, p);
    std::uint64_t r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    root = r;
    return true;
}

}  // namespace twistscan
