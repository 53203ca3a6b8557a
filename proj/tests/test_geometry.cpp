#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "gravlocc/geometry.hpp"
#include "test_support.hpp"

using namespace gravlocc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi = std::numbers::pi;

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    Vec3 v(N(rng), N(rng), N(rng));
    return v.normalized();
}

// Coupling from the angle representation, one pair at a time.
RMatrix coupling_from_angles(const OscillatorArray& arr) {
    const int n = arr.n();
    RMatrix g = RMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const auto a = pair_angles(arr, j, k);
            const double d3w = std::pow(arr.distance(j, k), 3) * arr.omega();
            g(j, j) += constants::G * arr[k].mass / d3w * (1.0 - 3.0 * std::pow(std::cos(a.theta_jk), 2));
            g(j, k) = -constants::G * std::sqrt(arr[j].mass * arr[k].mass) / d3w *
                      (std::cos(a.phi_jk) + 3.0 * std::cos(a.theta_jk) * std::cos(a.theta_kj));
        }
    return g;
}

OscillatorArray random_array(int n, std::mt19937_64& rng, double min_sep = 1.0) {
    std::uniform_real_distribution<double> U(0.0, 4.0 * n);
    std::uniform_real_distribution<double> M(0.5, 2.0);
    std::vector<Oscillator> osc;
    while (static_cast<int>(osc.size()) < n) {
        const Vec3 c(U(rng), U(rng), U(rng));
        bool ok = true;
        for (const auto& o : osc) ok = ok && (o.center - c).norm() >= min_sep;
        if (ok) osc.push_back({c, random_unit(rng), M(rng), std::nullopt});
    }
    return OscillatorArray(std::move(osc), 1.0);
}

}  // namespace

TEST_CASE("pair angles") {
    SECTION("collinear, axes along the joining line") {
        const auto arr = aligned_pair(1.0, 1.0, 1.0);
        const auto a = pair_angles(arr, 0, 1);
        CHECK_THAT(a.theta_jk, WithinAbs(0.0, 1e-12));
        CHECK_THAT(a.theta_kj, WithinAbs(pi, 1e-12));
        CHECK_THAT(a.phi_jk, WithinAbs(0.0, 1e-12));
    }
    SECTION("parallel axes orthogonal to the joining line") {
        const OscillatorArray arr({{Vec3(0, 0, 0), Vec3(0, 0, 1), 1.0, std::nullopt},
                                   {Vec3(1, 0, 0), Vec3(0, 0, 1), 1.0, std::nullopt}},
                                  1.0);
        const auto a = pair_angles(arr, 0, 1);
        CHECK_THAT(a.theta_jk, WithinAbs(pi / 2, 1e-12));
        CHECK_THAT(a.theta_kj, WithinAbs(pi / 2, 1e-12));
        CHECK_THAT(a.phi_jk, WithinAbs(0.0, 1e-12));
    }
    SECTION("random configurations reproduce dot products") {
        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 20; ++rep) {
            const auto arr = random_array(3, rng);
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    if (j == k) continue;
                    const Vec3 dhat = (arr[k].center - arr[j].center).normalized();
                    const auto a = pair_angles(arr, j, k);
                    CHECK_THAT(std::cos(a.theta_jk), WithinAbs(arr[j].axis.dot(dhat), 1e-12));
                    CHECK_THAT(std::cos(a.theta_kj), WithinAbs(-arr[k].axis.dot(dhat), 1e-12));
                    CHECK_THAT(std::cos(a.phi_jk), WithinAbs(arr[j].axis.dot(arr[k].axis), 1e-12));
                }
        }
    }
}

TEST_CASE("array validation") {
    CHECK_THROWS_AS(OscillatorArray({{Vec3(0, 0, 0), Vec3(1, 0, 0), 1.0, std::nullopt},
                                     {Vec3(0, 0, 0), Vec3(1, 0, 0), 1.0, std::nullopt}},
                                    1.0),
                    Error);
    CHECK_THROWS_AS(OscillatorArray({{Vec3(0, 0, 0), Vec3(2, 0, 0), 1.0, std::nullopt}}, 1.0), Error);
    CHECK_THROWS_AS(OscillatorArray({{Vec3(0, 0, 0), Vec3(1, 0, 0), -1.0, std::nullopt}}, 1.0), Error);
    try {
        OscillatorArray arr({{Vec3(0, 0, 0), Vec3(1, 0, 0), 1.0, 1.0}, {Vec3(1, 0, 0), Vec3(1, 0, 0), 1.0, 2.0}}, std::nullopt);
        FAIL("expected MissingCommonFrequency");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingCommonFrequency);
    }
    const OscillatorArray close({{Vec3(0, 0, 0), Vec3(1, 0, 0), 1.0, 1.0}, {Vec3(1, 0, 0), Vec3(1, 0, 0), 1.0, 1.0 + 1e-5}},
                                std::nullopt);
    CHECK_THAT(close.omega(), WithinRel(1.0 + 5e-6, 1e-12));
}

TEST_CASE("coupling matrix") {
    const double d = 1e-3, m = 1e-3, w = 1.0;
    const double gamma = constants::G * m / (d * d * d * w);
    SECTION("aligned pair is 2 gamma (-1, 1; 1, -1)") {
        const auto c = build_coupling_matrix(aligned_pair(d, m, w));
        CHECK_THAT(c.gamma, WithinRel(gamma, 1e-14));
        CHECK_THAT(c.g(0, 1), WithinRel(2 * gamma, 1e-13));
        CHECK_THAT(c.g(1, 0), WithinRel(2 * gamma, 1e-13));
        CHECK_THAT(c.g(0, 0), WithinRel(-2 * gamma, 1e-13));
        CHECK_THAT(c.g(1, 1), WithinRel(-2 * gamma, 1e-13));
        CHECK_THAT(g_operator_norm(c), WithinRel(4 * gamma, 1e-13));
    }
    SECTION("mutually orthogonal axes, both orthogonal to the joining line") {
        const OscillatorArray arr({{Vec3(0, 0, 0), Vec3(0, 1, 0), m, std::nullopt},
                                   {Vec3(d, 0, 0), Vec3(0, 0, 1), m, std::nullopt}},
                                  w);
        CHECK_THAT(build_coupling_matrix(arr).g(0, 1), WithinAbs(0.0, 1e-20));
    }
    SECTION("line of four: off-diagonal magnitude 2 gamma/|i-j|^3") {
        const auto c = build_coupling_matrix(aligned_line(4, d, m, w));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK_THAT(c.g(i, j), WithinRel(2 * gamma / std::pow(std::abs(i - j), 3), 1e-12));
        // The aligned-axis formula gives +2 gamma/8 for g_13.
        CHECK(c.g(0, 2) > 0.0);
        // Off-block of J = {1, 3} (1-based) against the K-matrix entries 2 gamma/|2(i-j)-1|^3.
        CHECK_THAT(c.g(0, 1), WithinRel(2 * gamma / std::pow(std::abs(2 * (0 - 0) - 1), 3), 1e-12));
        CHECK_THAT(c.g(2, 1), WithinRel(2 * gamma / std::pow(std::abs(2 * (1 - 0) - 1), 3), 1e-12));
        CHECK_THAT(c.g(0, 3), WithinRel(2 * gamma / std::pow(std::abs(2 * (0 - 1) - 1), 3), 1e-12));
    }
    SECTION("random geometries agree with the angle representation") {
        std::mt19937_64 rng(12);
        for (int rep = 0; rep < 20; ++rep) {
            const auto arr = random_array(5, rng);
            const RMatrix g = build_coupling_matrix(arr).g;
            CHECK((g - coupling_from_angles(arr)).cwiseAbs().maxCoeff() < 1e-12 * g.cwiseAbs().maxCoeff());
            CHECK(g == g.transpose());
        }
    }
    SECTION("explicit matrices") {
        RMatrix g(2, 2);
        g << 0.0, 3.0, 3.0, 1.0;
        CHECK(coupling_from_matrix(g).gamma == 1.5);
        CHECK(coupling_from_matrix(g, 7.0).gamma == 7.0);
        g(0, 1) = 2.0;
        CHECK_THROWS_AS(coupling_from_matrix(g), Error);
    }
}

TEST_CASE("universal operator-norm bound") {
    CHECK(universal_norm_factor(2) == 6.0);
    CHECK(universal_norm_factor(100) == 6.0 * 99);
    CHECK_THAT(universal_norm_factor(1000), WithinRel(288.0 * std::log(999.0) + 966.0, 1e-15));
    CHECK_THROWS_AS(universal_norm_factor(1), Error);
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        std::uniform_int_distribution<int> nd(2, 8);
        const auto arr = random_array(nd(rng), rng, 1.0);
        const auto c = build_coupling_matrix(arr);
        CHECK(g_operator_norm(c) <= g_norm_universal_bound(arr) * (1.0 + 1e-12));
    }
}

TEST_CASE("presets") {
    const auto pairs = disjoint_pairs(3, 1.0, 1.0, 1.0, 1e3);
    CHECK(pairs.n() == 6);
    CHECK_THAT(pairs.min_distance(), WithinAbs(1.0, 1e-12));
    const auto c = build_coupling_matrix(pairs);
    CHECK(std::abs(c.g(0, 2)) < 1e-8 * std::abs(c.g(0, 1)));
}
