#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/heights.hpp"
#include "twistscan/jobs.hpp"
#include "twistscan/modp.hpp"
#include "twistscan/numeric.hpp"
#include "twistscan/primes.hpp"

namespace twistscan {

// Search box for rational points x = m/e^2 with |m| <= x_bound * e^2,
// 1 <= e <= denom_bound.  Sieve primes must be odd good primes of the curve;
// the sieve only ever skips x whose f-value is provably a non-square.
struct PointSearchConfig {
    std::uint64_t x_bound = 1000;
    std::uint64_t denom_bound = 8;
    std::vector<std::uint32_t> sieve_primes;  // empty: pick automatically
    bool use_sieve = true;                    // false: plain exhaustive search
    unsigned threads = 1;
};

namespace detail {

// chi(v mod q) >= 0 table per (m mod q, e mod q) for N = m^3 + A m e^4 + B e^6.
struct SieveTable {
    std::uint32_t q;
    std::vector<std::uint8_t> allowed;  // q*q entries, [m][e]

    SieveTable(std::uint32_t q_, const Int& A, const Int& B) : q(q_), allowed(q_ * q_) {
        std::uint64_t a = mod_u64(A, q), b = mod_u64(B, q);
        std::vector<std::uint8_t> residue(q, 0);
        for (std::uint64_t t = 0; t <= (q - 1) / 2; ++t) residue[t * t % q] = 1;
        for (std::uint64_t m = 0; m < q; ++m)
            for (std::uint64_t e = 0; e < q; ++e) {
                std::uint64_t e2 = e * e % q, e4 = e2 * e2 % q, e6 = e4 * e2 % q;
                std::uint64_t n = (m * m % q * m + a * m % q * e4 + b * e6) % q;
                allowed[m * q + e] = (n == 0 || residue[n]) ? 1 : 0;
            }
    }
};

}  // namespace detail

inline std::vector<std::uint32_t> default_sieve_primes(const ShortModel& s, unsigned count = 6) {
    CurveInvariants inv = compute_invariants(s);
    std::vector<std::uint32_t> out;
    for (std::uint32_t q : primes_up_to(200)) {
        if (q < 3) continue;
        if (detail::mod_u64(inv.disc, q) == 0) continue;
        out.push_back(q);
        if (out.size() >= count) break;
    }
    return out;
}

// Exhaustive over the (m, e) box; every returned point satisfies the curve
// equation exactly.  The y >= 0 representative of each found x is returned;
// output is sorted by naive height of x, then x, then y.
inline std::vector<RationalPoint> point_search(const ShortModel& s, const PointSearchConfig& cfg) {
    if (cfg.x_bound < 1 || cfg.denom_bound < 1) throw Error("point search bounds must be >= 1");
    std::vector<detail::SieveTable> tables;
    if (cfg.use_sieve) {
        std::vector<std::uint32_t> qs = cfg.sieve_primes;
        if (qs.empty()) {
            qs = default_sieve_primes(s);
        } else {
            CurveInvariants inv = compute_invariants(s);
            for (std::uint32_t q : qs)
                if (q == 2 || detail::mod_u64(inv.disc, q) == 0)
                    throw Error("sieve primes must be odd good primes of the curve");
        }
        tables.reserve(qs.size());
        for (std::uint32_t q : qs) tables.emplace_back(q, s.A, s.B);
    }

    std::vector<std::vector<RationalPoint>> slots(cfg.denom_bound);
    parallel_for(cfg.denom_bound, cfg.threads, [&](std::uint64_t i) {
        long e = static_cast<long>(i) + 1;
        Int e2(static_cast<long>(e) * e);
        Int e4 = e2 * e2, e6 = e4 * e2, e3(static_cast<long>(e) * e * e);
        long M = static_cast<long>(cfg.x_bound) * e * e;
        Int N, y2;
        std::vector<RationalPoint>& found = slots[i];
        for (long m = -M; m <= M; ++m) {
            if (e > 1 && std::gcd(std::abs(m), e) != 1) continue;
            bool skip = false;
            for (const auto& t : tables) {
                long mr = m % static_cast<long>(t.q);
                if (mr < 0) mr += t.q;
                if (!t.allowed[static_cast<std::uint64_t>(mr) * t.q + (e % t.q)]) {
                    skip = true;
                    break;
                }
            }
            if (skip) continue;
            Int mz(m);
            N = mz * mz * mz + s.A * mz * e4 + s.B * e6;
            if (N < 0) continue;
            if (!mpz_perfect_square_p(N.get_mpz_t())) continue;
            Int root;
            mpz_sqrt(root.get_mpz_t(), N.get_mpz_t());
            found.push_back(RationalPoint::affine(make_rat(mz, e2), make_rat(root, e3)));
        }
    });
    std::vector<RationalPoint> out;
    for (auto& v : slots)
        for (auto& P : v) out.push_back(std::move(P));
    std::sort(out.begin(), out.end(), [](const RationalPoint& a, const RationalPoint& b) {
        Int ha = naive_height(a.x), hb = naive_height(b.x);
        if (ha != hb) return ha < hb;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Torsion test via the torsion-order classification: every rational torsion
// point has kP = O for some k <= 12.
inline bool is_torsion(const WeierstrassModel& m, const RationalPoint& P) {
    if (!on_curve(m, P)) throw PointNotOnCurve();
    if (P.at_infinity) return true;
    RationalPoint acc = P;  // k*P for k = 1..12
    for (int k = 2; k <= 12; ++k) {
        acc = add_points(m, acc, P);
        if (acc.at_infinity) return true;
    }
    return false;
}

inline bool is_torsion(const ShortModel& s, const RationalPoint& P) {
    return is_torsion(to_weierstrass(s), P);
}

// Witness for rank(E) >= lower_bound: non-torsion points whose height-pairing
// Gram matrix has all leading principal minors > tol.
struct RankCertificate {
    WeierstrassModel model;
    std::vector<RationalPoint> points;
    std::vector<std::vector<double>> gram;
    int lower_bound = 0;
    double tol = 0.0;
    double eps = 0.0;
};

namespace detail {

// Leading principal minors via Gaussian elimination without pivoting;
// returns false as soon as a minor fails the threshold.
inline bool minors_exceed(std::vector<std::vector<double>> g, double tol) {
    std::size_t n = g.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        det *= g[k][k];
        if (det <= tol) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = g[i][k] / g[k][k];
            for (std::size_t j = k; j < n; ++j) g[i][j] -= f * g[k][j];
        }
    }
    return true;
}

}  // namespace detail

// Greedy certificate: candidates ordered by increasing height, kept while the
// extended Gram matrix stays positive definite beyond tol.  Sub-maximal in
// principle, sound always.
inline RankCertificate rank_lower_bound(const WeierstrassModel& m,
                                        const std::vector<RationalPoint>& points, double tol,
                                        double eps = 0.0,
                                        std::uint64_t height_budget_bits = 1ull << 30) {
    if (tol <= 0) throw Error("tolerance must be positive");
    if (eps <= 0) eps = tol / 16.0;
    HeightContext ctx(m);
    ctx.budget_bits = height_budget_bits;
    RankCertificate cert;
    cert.model = m;
    cert.tol = tol;
    cert.eps = eps;

    struct Cand {
        RationalPoint P;
        double h;
    };
    std::vector<Cand> cands;
    for (const auto& P : points) {
        if (!on_curve(m, P)) throw PointNotOnCurve();
        if (P.at_infinity || is_torsion(m, P)) continue;
        cands.push_back(Cand{P, ctx.height(P, eps)});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.h != b.h) return a.h < b.h;
        if (a.P.x != b.P.x) return a.P.x < b.P.x;
        return a.P.y < b.P.y;
    });

    for (const auto& c : cands) {
        std::size_t k = cert.points.size();
        std::vector<std::vector<double>> trial = cert.gram;
        for (auto& row : trial) row.push_back(0.0);
        trial.emplace_back(k + 1, 0.0);
        trial[k][k] = c.h;
        for (std::size_t i = 0; i < k; ++i) {
            double hsum = ctx.height(add_points(m, c.P, cert.points[i]), eps);
            double pair = (hsum - c.h - trial[i][i]) / 2.0;  // trial[i][i] = hhat(points[i])
            trial[i][k] = trial[k][i] = pair;
        }
        if (detail::minors_exceed(trial, tol)) {
            cert.points.push_back(c.P);
            cert.gram = std::move(trial);
        }
    }
    cert.lower_bound = static_cast<int>(cert.points.size());
    return cert;
}

}  // namespace twistscan
