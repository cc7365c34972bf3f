#include <catch2/catch_amalgamated.hpp>

#include "twistscan/ranklb.hpp"
#include "twistscan/report.hpp"

using namespace twistscan;

namespace {
const ShortModel kCongruentShort{-1, 0};
const ShortModel kSixShort{-36, 0};
constexpr double kTol = 1e-6;
}

TEST_CASE("point search finds the 2-torsion of x^3 - x") {
    PointSearchConfig cfg;
    cfg.x_bound = 4;
    cfg.denom_bound = 2;
    auto pts = point_search(kCongruentShort, cfg);
    auto has = [&](long x, long y) {
        return std::find(pts.begin(), pts.end(),
                         RationalPoint::affine(Rat(x), Rat(y))) != pts.end();
    };
    REQUIRE(has(0, 0));
    REQUIRE(has(1, 0));
    REQUIRE(has(-1, 0));
    for (auto& P : pts) REQUIRE(on_curve(kCongruentShort, P));
}

TEST_CASE("point search covers m = -3, e = 1 on y^2 = x^3 - 36x") {
    PointSearchConfig cfg;
    cfg.x_bound = 13;
    cfg.denom_bound = 3;
    auto pts = point_search(kSixShort, cfg);
    REQUIRE(std::find(pts.begin(), pts.end(),
                      RationalPoint::affine(Rat(-3), Rat(9))) != pts.end());
    // (25/4, 35/8): x = 25/4 has e = 2
    REQUIRE(std::find(pts.begin(), pts.end(),
                      RationalPoint::affine(parse_rat("25/4"), parse_rat("35/8"))) != pts.end());
    for (auto& P : pts) REQUIRE(on_curve(kSixShort, P));
}

TEST_CASE("sieving loses nothing against unsieved brute force") {
    for (const ShortModel& s : {kCongruentShort, kSixShort, ShortModel{-2, 2}}) {
        PointSearchConfig sieved;
        sieved.x_bound = 1000;
        sieved.denom_bound = 4;
        PointSearchConfig brute = sieved;
        brute.use_sieve = false;
        auto a = point_search(s, sieved);
        auto b = point_search(s, brute);
        REQUIRE(a == b);
    }
}

TEST_CASE("bad sieve primes are rejected") {
    PointSearchConfig cfg;
    cfg.sieve_primes = {2};
    REQUIRE_THROWS_AS(point_search(kCongruentShort, cfg), Error);
    cfg.sieve_primes = {3};  // 3 divides disc of y^2 = x^3 - 36x
    REQUIRE_THROWS_AS(point_search(kSixShort, cfg), Error);
}

TEST_CASE("parallel point search matches serial") {
    PointSearchConfig serial;
    serial.x_bound = 500;
    serial.denom_bound = 6;
    PointSearchConfig parallel = serial;
    parallel.threads = 4;
    REQUIRE(point_search(kSixShort, serial) == point_search(kSixShort, parallel));
}

TEST_CASE("is_torsion classifies correctly") {
    WeierstrassModel m = to_weierstrass(kCongruentShort);
    REQUIRE(is_torsion(m, RationalPoint::infinity()));
    REQUIRE(is_torsion(m, RationalPoint::affine(Rat(0), Rat(0))));
    WeierstrassModel six = to_weierstrass(kSixShort);
    REQUIRE_FALSE(is_torsion(six, RationalPoint::affine(Rat(-3), Rat(9))));
    // order-3 point
    WeierstrassModel m3{0, 0, 1, 0, 0};
    REQUIRE(is_torsion(m3, RationalPoint::affine(Rat(0), Rat(0))));
    REQUIRE_THROWS_AS(is_torsion(m, RationalPoint::affine(Rat(5), Rat(1))), PointNotOnCurve);
}

TEST_CASE("torsion-only input certifies nothing") {
    WeierstrassModel m = to_weierstrass(kCongruentShort);
    RankCertificate cert = rank_lower_bound(m, {RationalPoint::affine(Rat(0), Rat(0))}, kTol, 1e-6);
    REQUIRE(cert.lower_bound == 0);
    REQUIRE(cert.points.empty());
}

TEST_CASE("one independent point certifies rank >= 1") {
    WeierstrassModel m = to_weierstrass(kSixShort);
    RankCertificate cert = rank_lower_bound(m, {RationalPoint::affine(Rat(-3), Rat(9))}, kTol, 1e-6);
    REQUIRE(cert.lower_bound == 1);
    REQUIRE(cert.gram[0][0] > kTol);
}

TEST_CASE("dependent pair {P, 2P} certifies only rank 1") {
    WeierstrassModel m = to_weierstrass(kSixShort);
    RationalPoint P = RationalPoint::affine(Rat(-3), Rat(9));
    RationalPoint twoP = add_points(m, P, P);
    RankCertificate cert = rank_lower_bound(m, {P, twoP}, kTol, 1e-6);
    REQUIRE(cert.lower_bound == 1);
}

TEST_CASE("negatives do not inflate the bound") {
    WeierstrassModel m = to_weierstrass(kSixShort);
    RationalPoint P = RationalPoint::affine(Rat(-3), Rat(9));
    RankCertificate cert = rank_lower_bound(m, {P, negate_point(m, P)}, kTol, 1e-6);
    REQUIRE(cert.lower_bound == 1);
}

TEST_CASE("two independent generators certify rank >= 2") {
    WeierstrassModel m{0, 1, 1, -2, 0};
    RationalPoint G1 = RationalPoint::affine(Rat(0), Rat(0));
    RationalPoint G2 = RationalPoint::affine(Rat(-1), Rat(1));
    RankCertificate cert = rank_lower_bound(m, {G1, G2}, kTol, 1e-6);
    REQUIRE(cert.lower_bound == 2);
    // gram symmetric, minors positive
    REQUIRE(cert.gram[0][1] == cert.gram[1][0]);
    REQUIRE(cert.gram[0][0] > kTol);
    REQUIRE(cert.gram[0][0] * cert.gram[1][1] - cert.gram[0][1] * cert.gram[1][0] > kTol);
}

TEST_CASE("certificate serializes to JSON") {
    WeierstrassModel m = to_weierstrass(kSixShort);
    RankCertificate cert = rank_lower_bound(m, {RationalPoint::affine(Rat(-3), Rat(9))}, kTol, 1e-6);
    nlohmann::json j = certificate_json(cert);
    REQUIRE(j["lower_bound"] == 1);
    REQUIRE(j["model"] == "[0,0,0,-36,0]");
    REQUIRE(j["points"].size() == 1);
    REQUIRE(j["points"][0][0] == "-3");
    REQUIRE(j["gram"].size() == 1);
}
