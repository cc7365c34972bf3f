#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "twistscan/ap_table.hpp"
#include "twistscan/families.hpp"
#include "twistscan/heuristics.hpp"
#include "twistscan/jobs.hpp"
#include "twistscan/minimal.hpp"
#include "twistscan/modp.hpp"
#include "twistscan/primes.hpp"

using namespace twistscan;

namespace {

const WeierstrassModel kCongruent{0, 0, 0, -1, 0};  // y^2 = x^3 - x, disc 64
const WeierstrassModel kDeg19{0, 0, 1, -38, 90};

// test-only oracle: count points of the long model by full enumeration
std::uint64_t enumerate_count(const WeierstrassModel& m, std::uint64_t p) {
    auto r = [&](const Int& v) {
        std::uint64_t x = mpz_fdiv_ui(v.get_mpz_t(), p);
        return x;
    };
    std::uint64_t a1 = r(m.a1), a2 = r(m.a2), a3 = r(m.a3), a4 = r(m.a4), a6 = r(m.a6);
    std::uint64_t n = 1;
    for (std::uint64_t x = 0; x < p; ++x)
        for (std::uint64_t y = 0; y < p; ++y) {
            std::uint64_t lhs = (y * y % p + a1 * x % p * y % p + a3 * y % p) % p;
            std::uint64_t rhs =
                (x * x % p * x % p + a2 * x % p * x % p + a4 * x % p + a6) % p;
            if (lhs == rhs) ++n;
        }
    return n;
}

}  // namespace

TEST_CASE("point counts on y^2 = x^3 - x") {
    REQUIRE(count_points(kCongruent, 5, CountMethod::Naive) == 8);
    REQUIRE(count_points(kCongruent, 7, CountMethod::Naive) == 8);
    REQUIRE_THROWS_AS(count_points(kCongruent, 2, CountMethod::Naive), BadReduction);
}

TEST_CASE("naive count matches the enumeration oracle on small primes") {
    for (std::uint32_t p : primes_up_to(60)) {
        for (const auto& m : {kCongruent, kDeg19, WeierstrassModel{0, 1, 1, -2, 0}}) {
            CurveInvariants inv = compute_invariants(m);
            if (mpz_fdiv_ui(inv.disc.get_mpz_t(), p) == 0) continue;
            REQUIRE(count_points(m, p, CountMethod::Naive) == enumerate_count(m, p));
        }
    }
}

TEST_CASE("naive and BSGS agree on the degree-19 curve up to 1000") {
    for (std::uint32_t p : primes_up_to(1000)) {
        CurveInvariants inv = compute_invariants(kDeg19);
        if (mpz_fdiv_ui(inv.disc.get_mpz_t(), p) == 0) continue;
        REQUIRE(count_points(kDeg19, p, CountMethod::Naive) ==
                count_points(kDeg19, p, CountMethod::BSGS));
    }
}

TEST_CASE("BSGS handles large primes") {
    // spot values against the naive count near the default crossover
    for (std::uint64_t p : {16411ull, 32771ull, 65537ull}) {
        REQUIRE(count_points(kDeg19, p, CountMethod::BSGS) ==
                count_points(kDeg19, p, CountMethod::Naive));
    }
}

TEST_CASE("naive and BSGS agree on every positive-genus table curve up to 10^4") {
    auto entries = load_isogeny_curves();
    auto primes = primes_up_to(10000);
    std::vector<WeierstrassModel> models;
    for (const auto& e : entries) {
        if (e.table != 1) continue;
        if (std::find(models.begin(), models.end(), e.model) == models.end())
            models.push_back(e.model);
    }
    REQUIRE(models.size() >= 20);
    for (const auto& m : models) {
        CurveInvariants inv = compute_invariants(m);
        parallel_for(primes.size(), 0, [&](std::uint64_t i) {
            std::uint64_t p = primes[i];
            if (mpz_fdiv_ui(inv.disc.get_mpz_t(), p) == 0) return;
            std::uint64_t n1 = count_points_naive(m, inv, p);
            std::uint64_t n2 = count_points_bsgs(m, inv, p);
            if (n1 != n2)
                throw Error("naive/BSGS disagree at p = " + std::to_string(p) + " on " +
                            model_str(m));
        });
    }
}

TEST_CASE("reduction types") {
    REQUIRE(reduction_type(kCongruent, 2) == ReductionType::Additive);
    REQUIRE(reduction_type(kCongruent, 5) == ReductionType::Good);
    // 11a1 is split multiplicative at 11
    REQUIRE(reduction_type(WeierstrassModel{0, -1, 1, -10, -20}, 11) ==
            ReductionType::SplitMultiplicative);
}

TEST_CASE("twist by p gives additive reduction at p") {
    // good-reduction short model twisted by D with p | D, p coprime to 2*disc
    ShortModel s{-1, 1};  // disc -16(4*(-1)^3+27) = -368 = -16*23
    for (long p : {5L, 7L, 13L}) {
        ShortModel t = quadratic_twist(s, p);
        WeierstrassModel m = to_weierstrass(t);
        REQUIRE(reduction_type(m, static_cast<std::uint64_t>(p)) == ReductionType::Additive);
        CurveInvariants inv = compute_invariants(m);
        REQUIRE(valuation(inv.c4, Int(p)) == 2);
        REQUIRE(valuation(inv.disc, Int(p)) == 6);
    }
}

TEST_CASE("non-minimal model detected at bad primes") {
    // scale a minimal model by u = 5: v_5(c4) = 4, v_5(disc) = 12
    WeierstrassModel fat{0, 0, 0, Int(-38) * 625, Int(90) * 15625};
    REQUIRE_THROWS_AS(reduction_type(fat, 5), NonMinimalModel);
}

TEST_CASE("smooth-point identity #E^ns = p - a_p at bad primes") {
    for (const auto& m : {WeierstrassModel{0, -1, 1, -10, -20}, WeierstrassModel{0, 0, 1, -1, 0},
                          WeierstrassModel{0, 1, 1, -2, 0}, kCongruent, kDeg19}) {
        CurveInvariants inv = compute_invariants(m);
        for (std::uint32_t p : primes_up_to(1000)) {
            if (mpz_fdiv_ui(inv.disc.get_mpz_t(), p) != 0) continue;
            long a = ap(m, p);
            REQUIRE(smooth_point_count(m, p) ==
                    static_cast<std::uint64_t>(static_cast<long>(p) - a));
        }
    }
}

TEST_CASE("a_p values on y^2 = x^3 - x") {
    REQUIRE(ap(kCongruent, 5) == -2);
    REQUIRE(ap(kCongruent, 7) == 0);
    REQUIRE(ap(kCongruent, 2) == 0);  // additive
}

TEST_CASE("ap table is complete, sorted, Hasse-valid") {
    ApTable t = ap_table(kCongruent, 200);
    auto ps = primes_up_to(200);
    REQUIRE(t.records.size() == ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        REQUIRE(t.records[i].p == ps[i]);
        REQUIRE(t.records[i].ap == ap(kCongruent, ps[i]));
        if (t.records[i].type == ReductionType::Good)
            REQUIRE(static_cast<double>(t.records[i].ap) * t.records[i].ap <= 4.0 * ps[i]);
    }
    REQUIRE(t.records.front().p == 2);
    REQUIRE(t.records.front().ap == 0);
    REQUIRE(t.records.front().type == ReductionType::Additive);
}

TEST_CASE("twist transfer against direct counts") {
    CurveInvariants inv = compute_invariants(kCongruent);
    ApTable base = ap_table(kCongruent, 600);
    std::mt19937_64 rng(99);
    auto sf = squarefree_range(-60, 60);
    int checked = 0;
    while (checked < 100) {
        long long D = sf[rng() % sf.size()];
        const ApRecord& rec = base.records[rng() % base.records.size()];
        Int Dz(static_cast<long>(D));
        if (rec.p == 2 || rec.type != ReductionType::Good) continue;
        if (mpz_fdiv_ui(Dz.get_mpz_t(), rec.p) == 0) continue;
        WeierstrassModel tw =
            minimal_model(to_weierstrass(quadratic_twist(ShortModel{-1, 0}, Dz)));
        REQUIRE(twisted_ap(rec, Dz) == ap(tw, rec.p));
        ++checked;
    }
    (void)inv;
}

TEST_CASE("documented transfer example: D = 2 at p = 5") {
    ApTable base = ap_table(kCongruent, 10);
    const ApRecord* r5 = nullptr;
    for (auto& r : base.records)
        if (r.p == 5) r5 = &r;
    REQUIRE(r5 != nullptr);
    REQUIRE(twisted_ap(*r5, Int(1)) == r5->ap);  // trivial twist
    REQUIRE(twisted_ap(*r5, Int(2)) == 2);       // (2|5) = -1, a_5 = -2
    REQUIRE(ap(to_weierstrass(ShortModel{-4, 0}), 5) == 2);
}

TEST_CASE("transfer errors off its domain") {
    ApTable base = ap_table(kCongruent, 10);
    for (auto& r : base.records) {
        if (r.p == 2) REQUIRE_THROWS_AS(twisted_ap(r, Int(3)), TransferNotApplicable);
        if (r.p == 5) REQUIRE_THROWS_AS(twisted_ap(r, Int(10)), TransferNotApplicable);
    }
}
