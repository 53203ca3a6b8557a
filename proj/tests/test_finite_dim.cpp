#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "gravlocc/finite_dim.hpp"
#include "test_support.hpp"

using namespace gravlocc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CMatrix random_positive(int n, std::mt19937_64& rng) {
    const CMatrix H = testsupport::random_hermitian(n, rng);
    return H * H + 0.5 * CMatrix::Identity(n, n);
}

// Smallest k with k Y - X >= 0, by bisection on the minimum eigenvalue.
double dmax_bisection(const CMatrix& X, const CMatrix& Y) {
    double lo = 0.0, hi = 1.0;
    auto feasible = [&](double k) { return hermitian_eigenvalues(CMatrix(k * Y - X)).front() >= 0.0; };
    while (!feasible(hi)) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TEST_CASE("d_max") {
    std::mt19937_64 rng(41);
    const CMatrix Y = random_positive(3, rng);
    CHECK_THAT(d_max(Y, Y), WithinAbs(1.0, 1e-12));
    CMatrix X = CMatrix::Zero(2, 2);
    X(0, 0) = 3.0;
    X(1, 1) = 1.0;
    CHECK_THAT(d_max(X, CMatrix::Identity(2, 2)), WithinAbs(3.0, 1e-14));
    for (int rep = 0; rep < 5; ++rep) {
        const CMatrix A = random_positive(4, rng), B = random_positive(4, rng);
        CHECK_THAT(d_max(A, B), WithinRel(dmax_bisection(A, B), 1e-8));
    }
    CHECK_THROWS_AS(d_max(X, CMatrix::Zero(2, 2)), Error);
}

TEST_CASE("Haar pair average") {
    for (int d = 2; d <= 5; ++d) CHECK_THAT(haar_pair_average(d).trace().real(), WithinAbs(1.0, 1e-14));
    const auto ev = hermitian_eigenvalues(haar_pair_average(2));
    CHECK_THAT(ev[0], WithinAbs(0.0, 1e-14));
    for (int i = 1; i < 4; ++i) CHECK_THAT(ev[i], WithinAbs(1.0 / 3.0, 1e-14));
    SECTION("Monte Carlo over Haar-random qubit states") {
        std::mt19937_64 rng(42);
        std::normal_distribution<double> N;
        CMatrix acc = CMatrix::Zero(4, 4);
        const int samples = 100000;
        for (int s = 0; s < samples; ++s) {
            Eigen::VectorXcd psi(2);
            psi << std::complex<double>(N(rng), N(rng)), std::complex<double>(N(rng), N(rng));
            psi.normalize();
            Eigen::VectorXcd pp(4);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) pp(i * 2 + j) = psi(i) * psi(j);
            acc += pp * pp.adjoint();
        }
        acc /= samples;
        CHECK((acc - haar_pair_average(2)).cwiseAbs().maxCoeff() < 1e-2);
    }
}

TEST_CASE("swap bound") {
    CHECK_THAT(swap_bound(2), WithinAbs(4.0 / 9.0, 1e-12));
    CHECK_THAT(swap_bound(3), WithinAbs(0.25, 1e-12));
    CHECK_THAT(swap_bound(5), WithinAbs(1.0 / 9.0, 1e-12));
    CHECK((flip_operator(3) * flip_operator(3) - CMatrix::Identity(9, 9)).norm() == 0.0);
}

TEST_CASE("teleportation moments") {
    for (double lam : {0.25, 1.0, 2.0}) {
        const auto m = teleportation_threshold_moments({GaussianWeight{lam}, 20});
        for (int N = 0; N <= 20; ++N) {
            CHECK_THAT(m.mu[N], WithinRel(lam * std::pow(2.0 + lam, -N - 1.0), 1e-10));
            CHECK_THAT(m.nu[N], WithinRel(lam * std::pow(1.0 + lam, -N - 1.0), 1e-10));
        }
    }
    const auto vac = teleportation_threshold_moments({RingWeight{0.0}, 10});
    for (int N = 0; N <= 10; ++N) {
        CHECK(vac.mu[N] == (N == 0 ? 1.0 : 0.0));
        CHECK(vac.nu[N] == (N == 0 ? 1.0 : 0.0));
    }
    SECTION("a radial density reproduces the Gaussian moments") {
        const double lam = 0.7;
        const RadialDensity p{[lam](double r) { return lam / std::numbers::pi * std::exp(-lam * r * r); }};
        const auto a = teleportation_threshold_moments({p, 12});
        const auto b = teleportation_threshold_moments({GaussianWeight{lam}, 12});
        for (int N = 0; N <= 12; ++N) CHECK_THAT(a.mu[N], WithinRel(b.mu[N], 1e-12));
    }
}

TEST_CASE("teleportation threshold") {
    const auto t2 = teleportation_threshold_bound(FiniteEnsembleSpec{GaussianWeight{2.0}, 20});
    CHECK_THAT(t2.value, WithinAbs(0.75, 1e-9));
    for (double v : t2.per_n) CHECK_THAT(v, WithinAbs(0.75, 1e-9));
    CHECK_THAT(teleportation_threshold_bound(FiniteEnsembleSpec{GaussianWeight{0.5}, 20}).value, WithinAbs(0.6, 1e-9));
    SECTION("closed-form moments give the same per-N values") {
        const double lam = 1.3;
        TeleportationMoments closed;
        for (int N = 0; N <= 20; ++N) {
            closed.mu.push_back(lam * std::pow(2.0 + lam, -N - 1.0));
            closed.nu.push_back(lam * std::pow(1.0 + lam, -N - 1.0));
        }
        const auto a = teleportation_threshold_bound(closed);
        const auto b = teleportation_threshold_bound(FiniteEnsembleSpec{GaussianWeight{lam}, 20});
        for (int N = 0; N <= 20; ++N) CHECK_THAT(b.per_n[N], WithinAbs(a.per_n[N], 1e-10));
    }
    CHECK_THAT(teleportation_threshold_bound(FiniteEnsembleSpec{RingWeight{0.0}, 5}).value, WithinAbs(1.0, 1e-15));
    try {
        teleportation_threshold_bound(FiniteEnsembleSpec{RingWeight{5.0}, 20});
        FAIL("expected TruncationInconclusive");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TruncationInconclusive);
    }
}
