#pragma once

// Finite-dimensional benchmarks: d_max, the swap bound, Haar averages and
// teleportation thresholds for phase-invariant coherent-state ensembles.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gravlocc/config.hpp"
#include "gravlocc/gaussian_core.hpp"

namespace gravlocc {

// lambda_max(Y^{-1/2} X Y^{-1/2}) = min{k : X <= k Y}.
inline double d_max(const CMatrix& X, const CMatrix& Y, const Tolerances& tol = default_tolerances()) {
    if (X.rows() != Y.rows() || X.rows() != X.cols() || Y.rows() != Y.cols())
        throw Error(ErrorKind::InvalidArgument, "d_max: shape mismatch");
    if (hermitian_defect(X) > tol.herm || hermitian_defect(Y) > tol.herm)
        throw Error(ErrorKind::NotHermitian, "d_max inputs must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Y + Y.adjoint()));
    const RVector ev = es.eigenvalues();
    if (!(ev.minCoeff() > tol.herm * std::max(1.0, ev.cwiseAbs().maxCoeff())))
        throw Error(ErrorKind::NonPositiveDefinite, "d_max: Y is not positive definite");
    const CMatrix V = es.eigenvectors();
    const CMatrix inv_root = V * ev.cwiseSqrt().cwiseInverse().cast<std::complex<double>>().asDiagonal() * V.adjoint();
    const CMatrix M = inv_root * (0.5 * (X + X.adjoint())) * inv_root;
    return hermitian_eigenvalues(0.5 * (M + M.adjoint()), tol).back();
}

// Flip |i,j> -> |j,i> on C^d (x) C^d, index i*d + j.
inline CMatrix flip_operator(int d) {
    const int D = d * d;
    CMatrix F = CMatrix::Zero(D, D);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) F(j * d + i, i * d + j) = 1.0;
    return F;
}

// int dpsi psi (x) psi = 2S/(d(d+1)), S = (1 + Flip)/2.
inline CMatrix haar_pair_average(int d) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "haar_pair_average needs d >= 2");
    const CMatrix S = 0.5 * (CMatrix::Identity(d * d, d * d) + flip_operator(d));
    return 2.0 / (d * (d + 1.0)) * S;
}

// d^2 lambda_max(A (x) A) with A = haar_pair_average(d). The spectrum of a
// Kronecker product of Hermitian matrices is the set of pairwise products,
// so lambda_max(A (x) A) is read off the explicit spectrum of A.
inline double swap_bound(int d) {
    const CMatrix A = haar_pair_average(d);
    const auto ev = hermitian_eigenvalues(A);
    double lmax = -std::numeric_limits<double>::infinity();
    for (double a : ev)
        for (double b : ev) lmax = std::max(lmax, a * b);
    const double value = d * d * lmax;
    const double closed = 4.0 / ((d + 1.0) * (d + 1.0));
    if (std::abs(value - closed) > 1e-10)
        throw Error(ErrorKind::InvalidArgument, "swap_bound: eigenvalue construction disagrees with 4/(d+1)^2");
    return value;
}

// Phase-invariant coherent-state ensembles, described by their radial profile.
struct GaussianWeight {
    double lambda;  // p(alpha) = (lambda/pi) exp(-lambda |alpha|^2)
};
struct RadialDensity {
    std::function<double(double)> p;  // p(|alpha|), normalized: 2 pi int r p(r) dr = 1
};
struct RingWeight {
    double radius;  // uniform phase at |alpha| = radius; radius 0 is the vacuum
};

struct FiniteEnsembleSpec {
    std::variant<GaussianWeight, RadialDensity, RingWeight> weight;
    int n_max = 20;
};

struct TeleportationMoments {
    std::vector<double> mu;  // mu_N, N = 0..n_max
    std::vector<double> nu;  // nu_k, k = 0..n_max
};

namespace detail {

// (2 pi / N!) int_0^inf r^{2N+1} p(r) e^{-c r^2} dr, cut at R where the
// Gaussian damping leaves a tail below 1e-14 relative.
inline double radial_moment(const std::function<double(double)>& p, int N, double c) {
    using boost::math::quadrature::gauss_kronrod;
    const double log_norm = std::log(2.0 * std::numbers::pi) - std::lgamma(N + 1.0);
    const auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double pr = p(r);
        if (pr <= 0.0) return 0.0;
        return std::exp(log_norm + (2.0 * N + 1.0) * std::log(r) - c * r * r + std::log(pr));
    };
    double R = std::sqrt((2.0 * N + 1.0) / (2.0 * c)) + 4.0;
    double prev = -1.0;
    for (int doubling = 0; doubling < 12; ++doubling) {
        double err = 0.0;
        const double v = gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 25, 1e-13, &err);
        if (!std::isfinite(v)) break;
        if (prev >= 0.0 && std::abs(v - prev) <= 1e-14 * std::abs(v) && err <= 1e-11 * std::abs(v)) return v;
        prev = v;
        R *= 2.0;
    }
    throw Error(ErrorKind::QuadratureFailure, "radial moment N = " + std::to_string(N) + " did not converge");
}

}  // namespace detail

// mu_N = (1/N!) int d^2a p(a) e^{-2|a|^2} |a|^{2N}, nu_k = (1/k!) int d^2a p(a) e^{-|a|^2} |a|^{2k}.
inline TeleportationMoments teleportation_threshold_moments(const FiniteEnsembleSpec& spec) {
    if (spec.n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
    TeleportationMoments m;
    std::function<double(double)> p;
    if (const auto* g = std::get_if<GaussianWeight>(&spec.weight)) {
        if (!(g->lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian weight needs lambda > 0");
        const double lam = g->lambda;
        p = [lam](double r) { return lam / std::numbers::pi * std::exp(-lam * r * r); };
    } else if (const auto* d = std::get_if<RadialDensity>(&spec.weight)) {
        p = d->p;
    } else {
        // A ring has no density; its moments are exact.
        const double r0 = std::get<RingWeight>(spec.weight).radius;
        for (int N = 0; N <= spec.n_max; ++N) {
            const double lg = std::lgamma(N + 1.0);
            if (r0 == 0.0) {
                m.mu.push_back(N == 0 ? 1.0 : 0.0);
                m.nu.push_back(N == 0 ? 1.0 : 0.0);
            } else {
                m.mu.push_back(std::exp(-2.0 * r0 * r0 + 2.0 * N * std::log(r0) - lg));
                m.nu.push_back(std::exp(-r0 * r0 + 2.0 * N * std::log(r0) - lg));
            }
        }
        return m;
    }
    for (int N = 0; N <= spec.n_max; ++N) {
        m.mu.push_back(detail::radial_moment(p, N, 2.0));
        m.nu.push_back(detail::radial_moment(p, N, 1.0));
    }
    return m;
}

struct TeleportationThreshold {
    double value = 0.0;
    int argmax = 0;
    std::vector<double> per_n;  // mu_N sum_k binom(N,k)/nu_k
};

// sup_N mu_N sum_{k=0}^N binom(N,k)/nu_k over N <= n_max. Terms with mu_N = 0
// contribute 0.
inline TeleportationThreshold teleportation_threshold_bound(const TeleportationMoments& m) {
    TeleportationThreshold out;
    for (std::size_t N = 0; N < m.mu.size(); ++N) {
        double value = 0.0;
        if (m.mu[N] != 0.0) {
            double binom = 1.0;
            for (std::size_t k = 0; k <= N; ++k) {
                if (k > 0) binom *= static_cast<double>(N - k + 1) / static_cast<double>(k);
                value += binom / m.nu[k];
            }
            value *= m.mu[N];
        }
        out.per_n.push_back(value);
        if (N == 0 || value > out.value) {
            out.value = value;
            out.argmax = static_cast<int>(N);
        }
    }
    const std::size_t last = out.per_n.size() - 1;
    if (last >= 1 && out.argmax == static_cast<int>(last) &&
        out.per_n[last] > out.per_n[last - 1] * (1.0 + 1e-9))
        throw Error(ErrorKind::TruncationInconclusive, "supremum still increasing at N_max");
    return out;
}

inline TeleportationThreshold teleportation_threshold_bound(const FiniteEnsembleSpec& spec) {
    return teleportation_threshold_bound(teleportation_threshold_moments(spec));
}

}  // namespace gravlocc
