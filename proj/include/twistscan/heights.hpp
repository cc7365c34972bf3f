#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <gmpxx.h>

#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/polyq.hpp"
#include "twistscan/rational.hpp"

namespace twistscan {

namespace detail {

inline double ln_mpz(const Int& v) {
    if (v == 0) return 0.0;
    signed long e;
    double d = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::numbers::ln2;
}

struct ClearedIdentity {
    Int scale;      // |L| with U phi + V psi = L
    Int coeff_sum;  // sum |U_i| + sum |V_i|
};

// Clears denominators in u a + v b = 1 and minimizes the integer content.
inline ClearedIdentity clear_identity(const PolyQ& u, const PolyQ& v) {
    Int L = 1;
    for (const Rat& c : u.c) L = lcm(L, c.get_den());
    for (const Rat& c : v.c) L = lcm(L, c.get_den());
    std::vector<Int> U, V;
    for (const Rat& c : u.c) U.push_back(Int(c.get_num() * (L / c.get_den())));
    for (const Rat& c : v.c) V.push_back(Int(c.get_num() * (L / c.get_den())));
    Int content = L;
    for (const Int& c : U) content = gcd(content, c);
    for (const Int& c : V) content = gcd(content, c);
    Int sum = 0;
    for (Int& c : U) {
        c /= content;
        sum += abs(c);
    }
    for (Int& c : V) {
        c /= content;
        sum += abs(c);
    }
    return ClearedIdentity{abs(L / content), sum};
}

}  // namespace detail

// Canonical (Neron-Tate) height in the x-coordinate normalization,
// hhat(P) = lim 4^{-n} h_x(2^n P), computed by exact big-integer doubling of
// the x-coordinate on the short model.  The truncation depth comes from a
// rigorous per-curve constant C with |h_x(2Q) - 4 h_x(Q)| <= C, so the
// returned value is within eps of the limit.
class HeightContext {
public:
    explicit HeightContext(const WeierstrassModel& m)
        : model_(m), inv_(compute_invariants(m)) {
        // the reduced short model keeps the tail constant small; hhat does not
        // change under the u-scaling
        ReducedShort rs = reduced_short_form(m);
        A_ = rs.model.A;
        B_ = rs.model.B;
        scale2_ = rs.u * rs.u;
        A2_ = A_ * A_;
        // x(2Q) = F(a,b) / G(a,b) for x = a/b in lowest terms:
        //   F = a^4 - 2A a^2 b^2 - 8B a b^3 + A^2 b^4
        //   G = 4b (a^3 + A a b^2 + B b^3)
        PolyQ phi({Rat(A2_), Rat(-8 * B_), Rat(-2 * A_), Rat(0), Rat(1)});
        PolyQ psi3({Rat(4 * B_), Rat(4 * A_), Rat(0), Rat(4)});
        PolyExtGcd e1 = poly_ext_gcd(phi, psi3);
        if (e1.g.degree() != 0)
            throw Error("duplication polynomials are not coprime (singular model?)");
        auto id1 = detail::clear_identity(e1.u, e1.v);  // (bU)F + VG = L b^7

        PolyQ fstar({Rat(1), Rat(0), Rat(-2 * A_), Rat(-8 * B_), Rat(A2_)});
        PolyQ gstar({Rat(0), Rat(4), Rat(0), Rat(4 * A_), Rat(4 * B_)});
        PolyExtGcd e2 = poly_ext_gcd(fstar, gstar);
        if (e2.g.degree() != 0)
            throw Error("reversed duplication polynomials are not coprime");
        auto id2 = detail::clear_identity(e2.u, e2.v);  // P1 F + Q1 G = L* a^7

        gcd_bound_ = lcm(id1.scale, id2.scale);  // gcd(F, G) divides this

        // lower direction: h(2Q) >= 4h(Q) - log(R* max(S_b/L, S_a/L*))
        double c_lower = detail::ln_mpz(gcd_bound_) +
                         std::max(detail::ln_mpz(id1.coeff_sum) - detail::ln_mpz(id1.scale),
                                  detail::ln_mpz(id2.coeff_sum) - detail::ln_mpz(id2.scale));
        // upper direction: h(2Q) <= 4h(Q) + log max(sum|F|, sum|G|)
        Int sumF = 1 + 2 * abs(A_) + 8 * abs(B_) + A2_;
        Int sumG = 4 + 4 * abs(A_) + 4 * abs(B_);
        double c_upper = detail::ln_mpz(sumF > sumG ? sumF : sumG);
        tail_constant_ = std::max(c_upper, std::max(c_lower, 0.0));
    }

    const WeierstrassModel& model() const { return model_; }
    double tail_constant() const { return tail_constant_; }
    std::uint64_t budget_bits = 1ull << 30;

    // Point transport to the reduced short model: X = (36x + 3 b2) / scale^2.
    Rat short_x(const RationalPoint& P) const {
        return (36 * P.x + Rat(3 * inv_.b2)) / Rat(scale2_);
    }

    unsigned depth_for(double eps) const {
        double eff = 0.95 * eps;
        double need = tail_constant_ / (3.0 * eff);
        if (need <= 1.0) return 0;
        return static_cast<unsigned>(std::ceil(std::log(need) / std::log(4.0)));
    }

    double height(const RationalPoint& P, double eps) const {
        if (eps <= 0) throw Error("height precision eps must be positive");
        if (P.at_infinity) return 0.0;
        if (!on_curve(model_, P)) throw PointNotOnCurve();
        Rat x = short_x(P);
        Int a = x.get_num(), b = x.get_den();
        unsigned n = depth_for(eps);
        Int F, G, t1, t2, g;
        for (unsigned k = 0; k < n; ++k) {
            std::size_t bits = std::max(mpz_sizeinbase(a.get_mpz_t(), 2),
                                        mpz_sizeinbase(b.get_mpz_t(), 2));
            if (4 * bits + 64 > budget_bits)
                throw PrecisionUnreachable(
                    "coordinate size would exceed the big-integer budget at doubling step " +
                    std::to_string(k) + " of " + std::to_string(n));
            t1 = a * a;  // a^2
            t2 = b * b;  // b^2
            G = 4 * b * (a * (t1 + A_ * t2) + B_ * b * t2);
            if (G == 0) return 0.0;  // hit 2-torsion: P is torsion
            F = t1 * t1 - 2 * A_ * t1 * t2 - 8 * B_ * a * b * t2 + A2_ * t2 * t2;
            // gcd(F, G) divides gcd_bound_, so two cheap gcds reduce exactly
            g = gcd(gcd(F, gcd_bound_), gcd(G, gcd_bound_));
            mpz_divexact(a.get_mpz_t(), F.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(b.get_mpz_t(), G.get_mpz_t(), g.get_mpz_t());
            if (b < 0) {
                a = -a;
                b = -b;
            }
        }
        Int m = abs(a) > b ? abs(a) : b;
        return std::ldexp(detail::ln_mpz(m), -2 * static_cast<int>(n));
    }

    // <P, Q> = (hhat(P+Q) - hhat(P) - hhat(Q)) / 2; callers usually cache the
    // single-point heights, so the raw combination is exposed too.
    double pairing(const RationalPoint& P, const RationalPoint& Q, double eps) const {
        RationalPoint S = add_points(model_, P, Q);
        return (height(S, eps) - height(P, eps) - height(Q, eps)) / 2.0;
    }

private:
    WeierstrassModel model_;
    CurveInvariants inv_;
    Int A_, B_, A2_;
    Int scale2_;
    Int gcd_bound_;
    double tail_constant_ = 0.0;
};

inline double canonical_height(const WeierstrassModel& m, const RationalPoint& P, double eps) {
    return HeightContext(m).height(P, eps);
}

}  // namespace twistscan
