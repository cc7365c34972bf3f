#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/fnv.hpp"
#include "twistscan/minimal.hpp"
#include "twistscan/numeric.hpp"

namespace twistscan {

enum class ReductionType : char {
    Good = 'g',
    SplitMultiplicative = 's',
    NonsplitMultiplicative = 'n',
    Additive = 'a',
};

enum class CountMethod { Naive, BSGS };

struct CountOptions {
    std::uint64_t naive_crossover = 1u << 14;  // BSGS above this
    std::uint64_t seed = 0;                    // extra entropy for BSGS draws
};

namespace detail {

inline std::uint64_t mod_u64(const Int& v, std::uint64_t p) {
    std::uint64_t r = mpz_fdiv_ui(v.get_mpz_t(), p);
    return r;
}

// Affine arithmetic on y^2 = x^3 + Ax + B over F_p, p >= 5.
struct CurveFp {
    std::uint64_t p, A, B;

    struct Pt {
        std::uint64_t x = 0, y = 0;
        bool inf = true;
    };

    std::uint64_t f(std::uint64_t x) const {
        return (mulmod(mulmod(x, x, p), x, p) + mulmod(A, x, p) + B) % p;
    }

    Pt neg(const Pt& P) const {
        if (P.inf || P.y == 0) return P;
        return Pt{P.x, p - P.y, false};
    }

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        std::uint64_t lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return Pt{};
            std::uint64_t num = (3 * mulmod(P.x, P.x, p) % p + A) % p;
            lambda = mulmod(num, invmod(2 * P.y % p, p), p);
        } else {
            std::uint64_t dy = (Q.y + p - P.y) % p;
            std::uint64_t dx = (Q.x + p - P.x) % p;
            lambda = mulmod(dy, invmod(dx, p), p);
        }
        std::uint64_t x3 = (mulmod(lambda, lambda, p) + 2 * p - P.x - Q.x) % p;
        std::uint64_t y3 = (mulmod(lambda, (P.x + p - x3) % p, p) + p - P.y) % p;
        return Pt{x3, y3, false};
    }

    Pt mul(std::uint64_t k, Pt P) const {
        Pt acc;
        while (k) {
            if (k & 1) acc = add(acc, P);
            k >>= 1;
            if (k) P = add(P, P);
        }
        return acc;
    }
};

// splitmix64, used for deterministic point draws.
struct SplitMix {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d4ecda037f4ae5ull;
        return z ^ (z >> 31);
    }
};

// All m in [lo, hi] with m*P = O, found by baby-step giant-step.
inline std::vector<std::uint64_t> bsgs_kill_multiples(const CurveFp& E, const CurveFp::Pt& P,
                                                      std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t L = hi - lo + 1;
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(L))) + 1;
    // baby steps jP, j in [0, s)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> baby;  // (x, j), points only
    baby.reserve(s);
    CurveFp::Pt jP{};
    bool jP_hit_inf_at = false;
    std::uint64_t ord_hint = 0;
    for (std::uint64_t j = 0; j < s; ++j) {
        if (j > 0 && jP.inf && !jP_hit_inf_at) {
            ord_hint = j;  // order of P is exactly j
            jP_hit_inf_at = true;
            break;
        }
        if (!jP.inf || j == 0) {
            if (j > 0) baby.emplace_back(jP.x, j);
        }
        jP = E.add(jP, P);
    }
    std::vector<std::uint64_t> out;
    if (ord_hint) {
        // tiny order: enumerate multiples directly
        std::uint64_t first = (lo + ord_hint - 1) / ord_hint * ord_hint;
        for (std::uint64_t m = first; m <= hi; m += ord_hint) out.push_back(m);
        return out;
    }
    std::sort(baby.begin(), baby.end());
    CurveFp::Pt sP = E.mul(s, P);
    // i = k*s + j with j in [0, s): iP = -loP  <=>  jP = -loP - k*sP =: T_k
    CurveFp::Pt T = E.neg(E.mul(lo, P));
    CurveFp::Pt msP = E.neg(sP);
    for (std::uint64_t k = 0; k * s < L; ++k) {
        if (T.inf) {
            std::uint64_t i = k * s;
            if (i < L) out.push_back(lo + i);
        } else {
            auto it = std::lower_bound(baby.begin(), baby.end(),
                                       std::make_pair(T.x, std::uint64_t{0}));
            for (; it != baby.end() && it->first == T.x; ++it) {
                std::uint64_t j = it->second;
                // x-match means T = +-jP; resolve by verifying both indices
                for (std::uint64_t i : {k * s + j, k * s >= j ? k * s - j : L}) {
                    if (i < L && E.mul(lo + i, P).inf) out.push_back(lo + i);
                }
            }
        }
        T = E.add(T, msP);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::uint64_t naive_count_short(std::uint64_t p, std::uint64_t A, std::uint64_t B) {
    std::vector<std::uint8_t> sq(p, 0);
    for (std::uint64_t t = 0; t <= (p - 1) / 2; ++t) sq[mulmod(t, t, p)] = 1;
    std::uint64_t n = 1;  // infinity
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t fx = (mulmod(mulmod(x, x, p), x, p) + mulmod(A, x, p) + B) % p;
        if (fx == 0)
            n += 1;
        else if (sq[fx])
            n += 2;
    }
    return n;
}

}  // namespace detail

// #E(F_p) for p in {2, 3} by direct enumeration of the long model.
inline std::uint64_t count_points_tiny(const WeierstrassModel& m, std::uint64_t p) {
    auto r = [&](const Int& v) { return detail::mod_u64(v, p); };
    std::uint64_t a1 = r(m.a1), a2 = r(m.a2), a3 = r(m.a3), a4 = r(m.a4), a6 = r(m.a6);
    std::uint64_t n = 1;
    for (std::uint64_t x = 0; x < p; ++x)
        for (std::uint64_t y = 0; y < p; ++y) {
            std::uint64_t lhs = (y * y + a1 * x * y + a3 * y) % p;
            std::uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
            if (lhs == rhs) ++n;
        }
    return n;
}

// Reduction of the model to short form mod p (p >= 5): y^2 = x^3 + Ax + B
// with A = -27 c4, B = -54 c6; isomorphic over F_p, so the count is the same.
inline detail::CurveFp reduce_short(const CurveInvariants& inv, std::uint64_t p) {
    std::uint64_t c4 = detail::mod_u64(inv.c4, p);
    std::uint64_t c6 = detail::mod_u64(inv.c6, p);
    std::uint64_t A = mulmod(p - 27 % p, c4, p);
    std::uint64_t B = mulmod(p - 54 % p, c6, p);
    return detail::CurveFp{p, A % p, B % p};
}

inline std::uint64_t count_points_naive(const WeierstrassModel& m, const CurveInvariants& inv,
                                        std::uint64_t p) {
    if (detail::mod_u64(inv.disc, p) == 0) throw BadReduction(p);
    if (p < 5) return count_points_tiny(m, p);
    detail::CurveFp E = reduce_short(inv, p);
    return detail::naive_count_short(p, E.A, E.B);
}

// Group order by baby-step giant-step in the Hasse interval.  Point orders
// from the curve and its quadratic twist (N + N' = 2p + 2) are intersected
// until a single candidate survives; tiny ambiguous p fall back to naive.
inline std::uint64_t count_points_bsgs(const WeierstrassModel& m, const CurveInvariants& inv,
                                       std::uint64_t p, std::uint64_t seed = 0) {
    if (detail::mod_u64(inv.disc, p) == 0) throw BadReduction(p);
    if (p < 50) return count_points_naive(m, inv, p);

    detail::CurveFp E = reduce_short(inv, p);
    auto w = static_cast<std::uint64_t>(2.0 * std::sqrt(static_cast<double>(p))) + 1;
    std::uint64_t lo = p + 1 - w, hi = p + 1 + w;

    // deterministic seed from (model, p)
    std::uint64_t h = fnv1a64(model_str(m));
    detail::SplitMix rng{h ^ (p * 0x9e3779b97f4a7c15ull) ^ seed};

    // quadratic twist by a non-residue g: (A g^2, B g^3)
    std::uint64_t g = 2;
    while (powmod(g, (p - 1) / 2, p) != p - 1) ++g;
    detail::CurveFp Et{p, mulmod(E.A, mulmod(g, g, p), p), mulmod(E.B, mulmod(mulmod(g, g, p), g, p), p)};

    auto draw = [&](const detail::CurveFp& C) {
        for (;;) {
            std::uint64_t x = rng.next() % p;
            std::uint64_t fx = C.f(x);
            std::uint64_t y;
            if (sqrtmod(fx, p, y)) return detail::CurveFp::Pt{x, std::min(y, fx == 0 ? y : p - y), false};
        }
    };

    std::vector<std::uint64_t> cand;       // candidates for N(E)
    bool have_cand = false;
    auto intersect = [&](const std::vector<std::uint64_t>& s) {
        if (!have_cand) {
            cand = s;
            have_cand = true;
            return;
        }
        std::vector<std::uint64_t> merged;
        std::set_intersection(cand.begin(), cand.end(), s.begin(), s.end(),
                              std::back_inserter(merged));
        cand = merged;
    };

    for (unsigned round = 0; round < 40; ++round) {
        bool twist = (round & 1u) != 0;
        const detail::CurveFp& C = twist ? Et : E;
        auto S = detail::bsgs_kill_multiples(C, draw(C), lo, hi);
        if (S.empty()) throw Error("BSGS found no annihilator in the Hasse interval");
        std::vector<std::uint64_t> forE;
        if (S.size() >= 2) {
            std::uint64_t d = S[1] - S[0];  // = order of the drawn point
            std::uint64_t first = (lo + d - 1) / d * d;
            for (std::uint64_t v = first; v <= hi; v += d)
                forE.push_back(twist ? 2 * p + 2 - v : v);
        } else {
            forE.push_back(twist ? 2 * p + 2 - S[0] : S[0]);
        }
        std::sort(forE.begin(), forE.end());
        intersect(forE);
        if (cand.size() == 1) return cand[0];
        if (cand.empty()) throw Error("BSGS candidate sets became inconsistent");
    }
    // ambiguity this persistent only happens for very small groups
    return count_points_naive(m, inv, p);
}

inline std::uint64_t count_points(const WeierstrassModel& m, std::uint64_t p, CountMethod method,
                                  std::uint64_t seed = 0) {
    CurveInvariants inv = compute_invariants(m);
    return method == CountMethod::Naive ? count_points_naive(m, inv, p)
                                        : count_points_bsgs(m, inv, p, seed);
}

// #E^ns(F_p): nonsingular points of the reduction, infinity included.
// Enumeration is exact and is only used at small p.
inline std::uint64_t smooth_point_count(const WeierstrassModel& m, std::uint64_t p) {
    auto r = [&](const Int& v) { return detail::mod_u64(v, p); };
    std::uint64_t a1 = r(m.a1), a2 = r(m.a2), a3 = r(m.a3), a4 = r(m.a4), a6 = r(m.a6);
    std::uint64_t n = 1;
    for (std::uint64_t x = 0; x < p; ++x)
        for (std::uint64_t y = 0; y < p; ++y) {
            std::uint64_t lhs = (mulmod(y, y, p) + mulmod(mulmod(a1, x, p), y, p) + mulmod(a3, y, p)) % p;
            std::uint64_t rhs = (mulmod(mulmod(x, x, p), x, p) + mulmod(a2, mulmod(x, x, p), p) +
                                 mulmod(a4, x, p) + a6) % p;
            if (lhs != rhs) continue;
            // partials: Fy = 2y + a1 x + a3, Fx = a1 y - (3x^2 + 2 a2 x + a4)
            std::uint64_t fy = (2 * y + mulmod(a1, x, p) + a3) % p;
            std::uint64_t fx = (mulmod(a1, y, p) + 5 * p -
                                (3 * mulmod(x, x, p) + 2 * mulmod(a2, x, p) + a4) % p) % p;
            if (fy != 0 || fx != 0) ++n;
        }
    return n;
}

// Classification at a prime where the model is minimal.  p >= 5 uses the
// c4 / -c6 criteria; p in {2, 3} counts smooth points directly.
inline ReductionType reduction_type(const WeierstrassModel& m, const CurveInvariants& inv,
                                    std::uint64_t p) {
    if (detail::mod_u64(inv.disc, p) != 0) return ReductionType::Good;
    Int P(static_cast<unsigned long>(p));
    unsigned vc4 = inv.c4 == 0 ? ~0u : valuation(inv.c4, P);
    unsigned vdisc = valuation(inv.disc, P);
    if (vc4 >= 4 && vdisc >= 12) {
        if (p >= 5) throw NonMinimalModel(static_cast<unsigned long>(p));
        // at 2 and 3 the scaling must also leave an integral model (Kraus)
        for (unsigned k = 1; vc4 >= 4 * k && vdisc >= 12 * k; ++k) {
            Int u;
            mpz_pow_ui(u.get_mpz_t(), P.get_mpz_t(), k);
            Int u4 = u * u * u * u;
            Int c4d = inv.c4 / u4;
            Int c6d = inv.c6 / (u4 * u * u);
            bool admissible =
                p == 2 ? detail::kraus_at_2(c4d, c6d) : detail::kraus_at_3(c6d);
            if (admissible) throw NonMinimalModel(static_cast<unsigned long>(p));
        }
    }
    if (p >= 5) {
        if (detail::mod_u64(inv.c4, p) == 0) return ReductionType::Additive;
        // multiplicative: split iff -c6 is a (nonzero) square mod p
        std::uint64_t v = (p - detail::mod_u64(inv.c6, p)) % p;
        return powmod(v, (p - 1) / 2, p) == 1 ? ReductionType::SplitMultiplicative
                                              : ReductionType::NonsplitMultiplicative;
    }
    std::uint64_t s = smooth_point_count(m, p);
    if (s == p - 1) return ReductionType::SplitMultiplicative;
    if (s == p + 1) return ReductionType::NonsplitMultiplicative;
    if (s == p) return ReductionType::Additive;
    throw Error("smooth-point count " + std::to_string(s) + " out of range at p = " +
                std::to_string(p));
}

inline ReductionType reduction_type(const WeierstrassModel& m, std::uint64_t p) {
    return reduction_type(m, compute_invariants(m), p);
}

// Trace of Frobenius with the standard bad-prime conventions.
inline long ap(const WeierstrassModel& m, const CurveInvariants& inv, std::uint64_t p,
               const CountOptions& opts = {}) {
    if (detail::mod_u64(inv.disc, p) != 0) {
        std::uint64_t N = p < opts.naive_crossover ? count_points_naive(m, inv, p)
                                                   : count_points_bsgs(m, inv, p, opts.seed);
        return static_cast<long>(p + 1) - static_cast<long>(N);
    }
    switch (reduction_type(m, inv, p)) {
        case ReductionType::SplitMultiplicative: return 1;
        case ReductionType::NonsplitMultiplicative: return -1;
        default: return 0;
    }
}

inline long ap(const WeierstrassModel& m, std::uint64_t p, const CountOptions& opts = {}) {
    return ap(m, compute_invariants(m), p, opts);
}

}  // namespace twistscan
