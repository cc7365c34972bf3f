#include <catch2/catch_amalgamated.hpp>

#include "twistscan/curve.hpp"
#include "twistscan/minimal.hpp"

using namespace twistscan;

namespace {

WeierstrassModel scale_model(const WeierstrassModel& m, long u) {
    Int U(u);
    return WeierstrassModel{m.a1 * U, m.a2 * U * U, m.a3 * U * U * U, m.a4 * U * U * U * U,
                            m.a6 * U * U * U * U * U * U};
}

const WeierstrassModel kTable1Models[] = {
    {1, 1, 1, -30, -76},      {0, 0, 0, -9504, 365904}, {1, 1, 0, -2, -7},
    {0, 0, 0, -2835, -71442}, {0, 0, 0, -595, -5586},   {0, 0, 0, -675, -79650},
    {0, 0, 1, -38, 90},       {1, 1, 1, -8, 6},         {0, 0, 0, -34790720, 78984748304},
};

}  // namespace

TEST_CASE("minimal_model is idempotent on table models") {
    for (const auto& m : kTable1Models) {
        WeierstrassModel m1 = minimal_model(m);
        REQUIRE(minimal_model(m1) == m1);
        REQUIRE(compute_invariants(m1).j == compute_invariants(m).j);
    }
}

TEST_CASE("scaling by u = 2 round-trips through minimization") {
    for (const auto& m : kTable1Models) {
        WeierstrassModel min0 = minimal_model(m);
        Int d0 = compute_invariants(min0).disc;
        WeierstrassModel fat = scale_model(min0, 2);
        REQUIRE(on_curve(fat, RationalPoint::infinity()));
        WeierstrassModel back = minimal_model(fat);
        REQUIRE(compute_invariants(back).disc == d0);
        REQUIRE(back == min0);
    }
}

TEST_CASE("minimization divides the discriminant") {
    for (const auto& m : kTable1Models)
        for (long u : {2L, 3L, 6L, 10L}) {
            WeierstrassModel fat = scale_model(m, u);
            Int before = abs(compute_invariants(fat).disc);
            Int after = abs(compute_invariants(minimal_model(fat)).disc);
            REQUIRE(mpz_divisible_p(before.get_mpz_t(), after.get_mpz_t()));
        }
}

TEST_CASE("database models are already minimal") {
    // standard minimal models; minimization must return them unchanged
    for (const auto& m : {WeierstrassModel{0, -1, 1, -10, -20}, WeierstrassModel{0, 0, 1, -1, 0},
                          WeierstrassModel{0, 1, 1, -2, 0}, WeierstrassModel{0, 0, 1, -7, 6}})
        REQUIRE(minimal_model(m) == m);
}

TEST_CASE("j preserved across minimization of the genus-zero table models") {
    for (const auto& m :
         {WeierstrassModel{0, -1, 1, -2, -1}, WeierstrassModel{1, -1, 0, -2, 6},
          WeierstrassModel{1, 1, 1, 0, 0}, WeierstrassModel{1, 0, 0, -110, 435},
          WeierstrassModel{1, 0, 1, -1, 0}, WeierstrassModel{0, -1, 1, 0, 0},
          WeierstrassModel{1, 1, 1, -28, -69}}) {
        REQUIRE(compute_invariants(minimal_model(m)).j == compute_invariants(m).j);
    }
}
