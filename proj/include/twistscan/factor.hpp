#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistscan/errors.hpp"
#include "twistscan/numeric.hpp"
#include "twistscan/primes.hpp"
#include "twistscan/rational.hpp"

namespace twistscan {

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Brent's cycle variant of Pollard rho; n odd composite, not a prime power of
// a tiny prime.  Always succeeds eventually (c is re-drawn on failure).
inline std::uint64_t pollard_brent_u64(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t q = 1;
        const unsigned batch = 64;
        for (std::uint64_t r = 1; d == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (std::uint64_t k = 0; k < r && d == 1; k += batch) {
                std::uint64_t ys = y;
                std::uint64_t lim = std::min<std::uint64_t>(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                if (d == n) {
                    // backtrack one step at a time
                    d = 1;
                    y = ys;
                    do {
                        y = (mulmod(y, y, n) + c) % n;
                        d = std::gcd(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
            }
        }
        if (d != n) return d;
    }
}

inline void factor_u64_into(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
    if (n <= 1) return;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    std::uint64_t d = pollard_brent_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

inline std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n) {
    std::map<std::uint64_t, unsigned> m;
    factor_u64_into(n, m);
    return {m.begin(), m.end()};
}

// Budget for factoring values beyond 64 bits.  Defaults: trial division to
// 10^6, then a bounded Pollard-rho pass.  Exhaustion is surfaced, never hidden.
struct FactorBudget {
    std::uint64_t trial_bound = 1'000'000;
    unsigned rho_tries = 24;
    unsigned long rho_iters = 200'000;
};

struct Factorization {
    std::vector<std::pair<Int, unsigned>> factors;  // sorted by prime
    Int unfactored = 1;                             // composite remainder, 1 when complete
    bool complete() const { return unfactored == 1; }
};

namespace detail {

// Pollard-Brent on mpz with an iteration cap; returns a nontrivial factor or 0.
inline Int rho_mpz(const Int& n, unsigned long c_seed, unsigned long max_iters) {
    Int x = 2, y = 2, d = 1, q = 1, c = c_seed;
    Int diff, ys;
    unsigned long iters = 0;
    for (unsigned long r = 1; d == 1 && iters < max_iters; r <<= 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
        for (unsigned long k = 0; k < r && d == 1; k += 128) {
            ys = y;
            unsigned long lim = std::min<unsigned long>(128, r - k);
            for (unsigned long i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                diff = x > y ? x - y : y - x;
                if (diff != 0) q = q * diff % n;
            }
            d = gcd(q, n);
            iters += lim;
            if (d == n) {
                d = 1;
                y = ys;
                do {
                    y = (y * y + c) % n;
                    diff = x > y ? x - y : y - x;
                    d = gcd(diff, n);
                    ++iters;
                } while (d == 1 && iters < max_iters);
                break;
            }
        }
    }
    if (d != 1 && d != n) return d;
    return 0;
}

inline void factor_mpz_rec(Int n, const FactorBudget& budget,
                           std::map<Int, unsigned>& found, Int& unfactored) {
    if (n == 1) return;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 63) {
        for (auto& [p, e] : factor_u64(mpz_get_ui(n.get_mpz_t())))
            found[Int(static_cast<unsigned long>(p))] += e;
        return;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        ++found[n];
        return;
    }
    // perfect powers split for free
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::map<Int, unsigned> sub;
                Int sub_unf = 1;
                factor_mpz_rec(root, budget, sub, sub_unf);
                for (auto& [p, e] : sub) found[p] += e * static_cast<unsigned>(k);
                if (sub_unf != 1) {
                    Int pw;
                    mpz_pow_ui(pw.get_mpz_t(), sub_unf.get_mpz_t(), k);
                    unfactored *= pw;
                }
                return;
            }
        }
    }
    for (unsigned t = 0; t < budget.rho_tries; ++t) {
        Int d = rho_mpz(n, t + 1, budget.rho_iters);
        if (d != 0) {
            factor_mpz_rec(d, budget, found, unfactored);
            factor_mpz_rec(n / d, budget, found, unfactored);
            return;
        }
    }
    unfactored *= n;
}

}  // namespace detail

// Factors |n| as far as the budget allows.  Small primes are stripped first;
// anything that fits in 64 bits afterwards is finished unconditionally.
inline Factorization factor_integer(const Int& n, const FactorBudget& budget = {}) {
    Factorization out;
    if (n == 0) throw ZeroInput();
    Int m = abs(n);
    std::map<Int, unsigned> found;
    if (m > 1 && mpz_sizeinbase(m.get_mpz_t(), 2) > 63) {
        // strip small primes only for oversize inputs; the u64 path below
        // handles everything else by itself
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                ++found[Int(static_cast<unsigned long>(p))];
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            }
        }
        if (mpz_sizeinbase(m.get_mpz_t(), 2) > 63) {
            static thread_local std::vector<std::uint32_t> trial_primes;
            static thread_local std::uint64_t trial_primes_bound = 0;
            if (trial_primes_bound != budget.trial_bound) {
                trial_primes = primes_up_to(budget.trial_bound);
                trial_primes_bound = budget.trial_bound;
            }
            for (std::uint32_t p : trial_primes) {
                if (p <= 13) continue;
                if (mpz_sizeinbase(m.get_mpz_t(), 2) <= 63) break;
                while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                    ++found[Int(static_cast<unsigned long>(p))];
                    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                }
            }
        }
    }
    Int unfactored = 1;
    detail::factor_mpz_rec(m, budget, found, unfactored);
    out.factors.assign(found.begin(), found.end());
    out.unfactored = unfactored;
    return out;
}

// Squarefree part of a nonzero integer, sign preserved.  Throws
// FactorizationIncomplete when the budget runs out before the odd-exponent
// part is pinned down.
inline Int squarefree_part(const Int& n, const FactorBudget& budget = {}) {
    if (n == 0) throw ZeroInput();
    Factorization f = factor_integer(n, budget);
    Int d = sgn(n) < 0 ? -1 : 1;
    for (auto& [p, e] : f.factors)
        if (e & 1u) d *= p;
    if (!f.complete()) {
        // a square cofactor cannot change the class
        if (mpz_perfect_square_p(f.unfactored.get_mpz_t())) return d;
        throw FactorizationIncomplete(d * f.unfactored, f.unfactored);
    }
    return d;
}

inline Int squarefree_part(long n, const FactorBudget& budget = {}) {
    return squarefree_part(Int(n), budget);
}

// p-adic valuation of a nonzero integer.
inline unsigned valuation(Int n, const Int& p) {
    unsigned v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

}  // namespace twistscan
