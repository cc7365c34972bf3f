#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "twistscan/errors.hpp"
#include "twistscan/factor.hpp"
#include "twistscan/rational.hpp"

namespace twistscan {

// Integral long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct WeierstrassModel {
    Int a1, a2, a3, a4, a6;

    bool operator==(const WeierstrassModel&) const = default;
};

// y^2 = x^3 + A x + B.
struct ShortModel {
    Int A, B;

    bool operator==(const ShortModel&) const = default;
};

struct CurveInvariants {
    Int b2, b4, b6, b8;
    Int c4, c6, disc;
    Rat j;
};

inline CurveInvariants compute_invariants(const WeierstrassModel& m) {
    CurveInvariants inv;
    inv.b2 = m.a1 * m.a1 + 4 * m.a2;
    inv.b4 = 2 * m.a4 + m.a1 * m.a3;
    inv.b6 = m.a3 * m.a3 + 4 * m.a6;
    inv.b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 - m.a1 * m.a3 * m.a4 +
             m.a2 * m.a3 * m.a3 - m.a4 * m.a4;
    inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
    inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
    inv.disc = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 -
               27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
    if (inv.disc == 0) throw SingularModel();
    if (inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 != 1728 * inv.disc)
        throw Error("invariant identity c4^3 - c6^2 = 1728*disc violated");
    inv.j = make_rat(inv.c4 * inv.c4 * inv.c4, inv.disc);
    return inv;
}

inline WeierstrassModel to_weierstrass(const ShortModel& s) {
    return WeierstrassModel{0, 0, 0, s.A, s.B};
}

inline CurveInvariants compute_invariants(const ShortModel& s) {
    return compute_invariants(to_weierstrass(s));
}

// Quadratic twist by a nonzero integer D: (A, B) -> (A D^2, B D^3).
inline ShortModel quadratic_twist(const ShortModel& m, const Int& D) {
    if (D == 0) throw ZeroTwist();
    return ShortModel{m.A * D * D, m.B * D * D * D};
}

// The c-invariant short form (-27 c4, -54 c6); same j, same twist orbit.
inline ShortModel short_form(const WeierstrassModel& m) {
    CurveInvariants inv = compute_invariants(m);
    return ShortModel{-27 * inv.c4, -54 * inv.c6};
}

// Strips d^2 from A and d^3 from B for every removable prime d (a twist by
// 1/d, so the Qbar-class is unchanged).  Best effort under the factor budget.
inline ShortModel reduce_twist_content(const ShortModel& m, const FactorBudget& budget = {}) {
    if (m.A == 0 || m.B == 0) return m;  // CM shapes: nothing to strip safely here
    Int A = m.A, B = m.B;
    Factorization f = factor_integer(gcd(A, B), budget);
    for (auto& [p, e] : f.factors) {
        (void)e;
        Int p2 = p * p, p3 = p2 * p;
        while (mpz_divisible_p(A.get_mpz_t(), p2.get_mpz_t()) &&
               mpz_divisible_p(B.get_mpz_t(), p3.get_mpz_t())) {
            mpz_divexact(A.get_mpz_t(), A.get_mpz_t(), p2.get_mpz_t());
            mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), p3.get_mpz_t());
        }
    }
    return ShortModel{A, B};
}

// Integral short model with prescribed j-invariant.  Generic branch uses
// A = 3j(1728-j), B = 2j(1728-j)^2 with the denominator cleared by the
// smallest compatible power; 4th/6th-power content is stripped afterwards.
inline ShortModel curve_from_j(const Rat& j, const FactorBudget& budget = {}) {
    if (j == 0) return ShortModel{0, 1};
    if (j == 1728) return ShortModel{1, 0};
    const Int& m = j.get_num();
    const Int& n = j.get_den();
    Int t = 1728 * n - m;  // coprime to n since gcd(m, n) = 1
    Int A = 3 * m * t * n;
    Int B = 2 * m * t * t;
    // clear n: A needs n^2, B needs n^3; scale (A,B) by (u^4, u^6) with u^2 = n
    A *= n;        // 3 m t n^2
    B *= n * n * n;  // 2 m t^2 n^3
    ShortModel out{A, B};
    // strip shared 4th/6th powers (u-scaling, same curve over Q)
    Factorization f = factor_integer(gcd(out.A, out.B), budget);
    for (auto& [p, e] : f.factors) {
        (void)e;
        Int p4 = p * p * p * p, p6 = p4 * p * p;
        while (mpz_divisible_p(out.A.get_mpz_t(), p4.get_mpz_t()) &&
               mpz_divisible_p(out.B.get_mpz_t(), p6.get_mpz_t())) {
            mpz_divexact(out.A.get_mpz_t(), out.A.get_mpz_t(), p4.get_mpz_t());
            mpz_divexact(out.B.get_mpz_t(), out.B.get_mpz_t(), p6.get_mpz_t());
        }
    }
    return out;
}

// ---- points ----------------------------------------------------------------

struct RationalPoint {
    bool at_infinity = true;
    Rat x, y;

    static RationalPoint infinity() { return RationalPoint{}; }
    static RationalPoint affine(Rat x_, Rat y_) {
        return RationalPoint{false, std::move(x_), std::move(y_)};
    }
    bool operator==(const RationalPoint& o) const {
        if (at_infinity || o.at_infinity) return at_infinity == o.at_infinity;
        return x == o.x && y == o.y;
    }
};

inline bool on_curve(const WeierstrassModel& m, const RationalPoint& P) {
    if (P.at_infinity) return true;
    Rat lhs = P.y * P.y + Rat(m.a1) * P.x * P.y + Rat(m.a3) * P.y;
    Rat rhs = P.x * P.x * P.x + Rat(m.a2) * P.x * P.x + Rat(m.a4) * P.x + Rat(m.a6);
    return lhs == rhs;
}

inline bool on_curve(const ShortModel& m, const RationalPoint& P) {
    return on_curve(to_weierstrass(m), P);
}

inline RationalPoint negate_point(const WeierstrassModel& m, const RationalPoint& P) {
    if (P.at_infinity) return P;
    return RationalPoint::affine(P.x, -P.y - Rat(m.a1) * P.x - Rat(m.a3));
}

// Chord-tangent addition.  Inputs are checked against the curve equation.
inline RationalPoint add_points(const WeierstrassModel& m, const RationalPoint& P,
                                const RationalPoint& Q) {
    if (!on_curve(m, P) || !on_curve(m, Q)) throw PointNotOnCurve();
    if (P.at_infinity) return Q;
    if (Q.at_infinity) return P;
    Rat a1(m.a1), a2(m.a2), a3(m.a3), a4(m.a4), a6(m.a6);
    Rat lambda, nu;
    if (P.x == Q.x) {
        if (Q.y == -P.y - a1 * P.x - a3) return RationalPoint::infinity();
        // tangent line at P (= Q)
        Rat den = 2 * P.y + a1 * P.x + a3;
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / den;
        nu = (-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) / den;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
        nu = P.y - lambda * P.x;
    }
    Rat x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    Rat y3 = -(lambda + a1) * x3 - nu - a3;
    return RationalPoint::affine(x3, y3);
}

inline RationalPoint multiply_point(const WeierstrassModel& m, long k, RationalPoint P) {
    if (k == 0 || P.at_infinity) return RationalPoint::infinity();
    if (k < 0) {
        P = negate_point(m, P);
        k = -k;
    }
    RationalPoint acc = RationalPoint::infinity();
    while (k) {
        if (k & 1) acc = add_points(m, acc, P);
        k >>= 1;
        if (k) P = add_points(m, P, P);
    }
    return acc;
}

// ---- model transport ----------------------------------------------------------

// The c-invariant short form with 4th/6th-power content stripped: a u-scaled
// copy in the same Q-isomorphism class, x_c = u^2 x_r on coordinates.
struct ReducedShort {
    ShortModel model;
    Int u;
};

inline ReducedShort reduced_short_form(const WeierstrassModel& m, const FactorBudget& budget = {}) {
    ShortModel s = short_form(m);
    Int u = 1;
    Factorization f = factor_integer(gcd(s.A, s.B), budget);
    for (auto& [p, e] : f.factors) {
        (void)e;
        Int p4 = p * p * p * p, p6 = p4 * p * p;
        while (mpz_divisible_p(s.A.get_mpz_t(), p4.get_mpz_t()) &&
               mpz_divisible_p(s.B.get_mpz_t(), p6.get_mpz_t())) {
            mpz_divexact(s.A.get_mpz_t(), s.A.get_mpz_t(), p4.get_mpz_t());
            mpz_divexact(s.B.get_mpz_t(), s.B.get_mpz_t(), p6.get_mpz_t());
            u *= p;
        }
    }
    return ReducedShort{std::move(s), std::move(u)};
}

// Point transport to/from the c-invariant short model:
//   X = 36x + 3 b2,  Y = 108 (2y + a1 x + a3).
inline RationalPoint to_c_short_point(const WeierstrassModel& m, const CurveInvariants& inv,
                                      const RationalPoint& P) {
    if (P.at_infinity) return P;
    return RationalPoint::affine(36 * P.x + Rat(3 * inv.b2),
                                 108 * (2 * P.y + Rat(m.a1) * P.x + Rat(m.a3)));
}

inline RationalPoint from_c_short_point(const WeierstrassModel& m, const CurveInvariants& inv,
                                        const RationalPoint& Ps) {
    if (Ps.at_infinity) return Ps;
    Rat x = (Ps.x - Rat(3 * inv.b2)) / 36;
    Rat y = (Ps.y / 108 - Rat(m.a1) * x - Rat(m.a3)) / 2;
    return RationalPoint::affine(x, y);
}

// ---- bracket serialization --------------------------------------------------

inline std::string model_str(const WeierstrassModel& m) {
    return "[" + m.a1.get_str() + "," + m.a2.get_str() + "," + m.a3.get_str() +
           "," + m.a4.get_str() + "," + m.a6.get_str() + "]";
}

// Accepts "[a1,a2,a3,a4,a6]", whitespace-tolerant.
inline WeierstrassModel parse_model(std::string_view s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ParseError("curve must be given as [a1,a2,a3,a4,a6], got '" + std::string(s) + "'");
    t = t.substr(1, t.size() - 2);
    std::array<Int, 5> a;
    size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
        size_t comma = (i < 4) ? t.find(',', pos) : t.size();
        if (comma == std::string::npos) throw ParseError("expected 5 coefficients in '" + std::string(s) + "'");
        std::string tok = t.substr(pos, comma - pos);
        try {
            a[i] = Int(tok, 10);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad integer '" + tok + "'");
        }
        pos = comma + 1;
    }
    if (pos <= t.size() && t.find(',', pos) != std::string::npos)
        throw ParseError("expected exactly 5 coefficients in '" + std::string(s) + "'");
    return WeierstrassModel{a[0], a[1], a[2], a[3], a[4]};
}

}  // namespace twistscan
