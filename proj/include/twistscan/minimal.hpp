#pragma once

#include <gmpxx.h>

#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/factor.hpp"

namespace twistscan {

namespace detail {

// Kraus: (c4, c6) with c4^3 - c6^2 = 1728 disc, disc != 0, comes from an
// integral model iff both local conditions below hold.
inline bool kraus_at_3(const Int& c6) {
    Int r = c6 % 27;
    if (r < 0) r += 27;
    return r != 9 && r != 18;  // c6 != +-9 mod 27
}

inline bool kraus_at_2(const Int& c4, const Int& c6) {
    Int r4 = c6 % 4;
    if (r4 < 0) r4 += 4;
    if (r4 == 3) return true;  // c6 = -1 mod 4
    Int r16 = c4 % 16;
    if (r16 != 0) return false;
    Int r32 = c6 % 32;
    if (r32 < 0) r32 += 32;
    return r32 == 0 || r32 == 8;
}

}  // namespace detail

// Rebuilds the reduced integral model with given invariants (a1, a3 in {0,1},
// |a2| <= 1 normalization via b2 in (-6, 6]).  Requires the Kraus conditions.
inline WeierstrassModel model_from_c4c6(const Int& c4, const Int& c6) {
    Int b2 = (-c6) % 12;
    if (b2 > 6) b2 -= 12;
    if (b2 <= -6) b2 += 12;
    Int b4 = (b2 * b2 - c4) / 24;
    Int b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6) / 216;
    Int a1 = b2 % 2 != 0 ? 1 : 0;
    Int a2 = (b2 - a1) / 4;
    Int a3 = b6 % 2 != 0 ? 1 : 0;
    Int a4 = (b4 - a1 * a3) / 2;
    Int a6 = (b6 - a3) / 4;
    WeierstrassModel m{a1, a2, a3, a4, a6};
    CurveInvariants check = compute_invariants(m);
    if (check.c4 != c4 || check.c6 != c6)
        throw Error("c4/c6 do not satisfy the Kraus integrality conditions");
    return m;
}

// Laska-Kraus-Connell global minimization.  The scaling factor u is extracted
// from the joint 4th/6th-power content of (c4, c6) and then trimmed at 2 and 3
// until the Kraus conditions admit an integral model.  Factoring is budgeted:
// an unsplit composite cofactor is still tried as a scaling unit, so the
// result is always a valid integral model with the same j, globally minimal
// whenever the content factors within budget.
inline WeierstrassModel minimal_model(const WeierstrassModel& m,
                                      const FactorBudget& budget = {}) {
    CurveInvariants inv = compute_invariants(m);
    Int u = 1;
    Int content = (inv.c4 == 0) ? Int(abs(inv.c6))
                                : (inv.c6 == 0 ? Int(abs(inv.c4)) : Int(gcd(inv.c4, inv.c6)));
    if (content > 1) {
        Factorization f = factor_integer(content, budget);
        std::vector<Int> units;
        for (auto& [p, e] : f.factors) {
            (void)e;
            units.push_back(p);
        }
        if (f.unfactored != 1) units.push_back(f.unfactored);
        for (const Int& p : units) {
            unsigned vc4 = inv.c4 == 0 ? ~0u : valuation(inv.c4, p);
            unsigned vc6 = inv.c6 == 0 ? ~0u : valuation(inv.c6, p);
            unsigned k = std::min(vc4 / 4, vc6 / 6);
            Int pk;
            mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
            u *= pk;
        }
    }
    // Trim powers of 2 and 3 from u until the Kraus conditions admit a model;
    // among admissible sub-scalings the largest u wins (Laska).
    unsigned v2 = valuation(u, 2), v3 = valuation(u, 3);
    Int u0 = u;
    for (unsigned i = 0; i < v2; ++i) u0 /= 2;
    for (unsigned i = 0; i < v3; ++i) u0 /= 3;
    Int best = 0, best_c4, best_c6;
    for (unsigned i = 0; i <= v2; ++i) {
        for (unsigned j = 0; j <= v3; ++j) {
            Int cand = u0;
            mpz_mul_2exp(cand.get_mpz_t(), cand.get_mpz_t(), i);
            for (unsigned t = 0; t < j; ++t) cand *= 3;
            if (cand <= best) continue;
            Int u4 = cand * cand * cand * cand;
            Int u6 = u4 * cand * cand;
            Int c4 = inv.c4 / u4;
            Int c6 = inv.c6 / u6;
            if (detail::kraus_at_2(c4, c6) && detail::kraus_at_3(c6)) {
                best = cand;
                best_c4 = c4;
                best_c6 = c6;
            }
        }
    }
    if (best == 0)
        throw Error("minimization failed the Kraus conditions on an integral input");
    return model_from_c4c6(best_c4, best_c6);
}

}  // namespace twistscan
