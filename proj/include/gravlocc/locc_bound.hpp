#pragma once

// Upper bounds on the LOCC simulation fidelity of Gaussian unitaries on the
// Gaussian coherent-state ensemble with inverse variance lambda.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gravlocc/config.hpp"
#include "gravlocc/gaussian_core.hpp"
#include "gravlocc/geometry.hpp"
#include "gravlocc/subsets.hpp"

namespace gravlocc {

struct GaussianEnsemble {
    int n = 1;
    double lambda = 1.0;

    GaussianEnsemble(int modes, double lam) : n(modes), lambda(lam) {
        if (modes < 1) throw Error(ErrorKind::InvalidArgument, "ensemble needs n >= 1");
        if (!(lam >= 0.0) || !std::isfinite(lam)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
    }

    // lambda == 0 is a limit; eigenvalue routines substitute the floor.
    bool is_limit() const { return lambda == 0.0; }
    double lambda_for_eigen(const Tolerances& tol = default_tolerances()) const {
        return lambda > 0.0 ? lambda : tol.lambda_floor;
    }
};

enum class BoundKind { GeneralSymplectic, Passive };

struct BoundResult {
    double value = 1.0;
    SignedModeMask subset;            // minimizing J (empty mask for n = 1)
    std::vector<double> eigenvalues;  // |z_l| (2n of them) or |w_l| (n of them)
    BoundKind kind = BoundKind::Passive;
    double lambda = 0.0;              // as requested
    double lambda_used = 0.0;         // after the floor
    std::optional<double> t;          // seconds, passive bounds only
    std::size_t subsets_examined = 0;
};

// 2^n (1+l)^n / prod_{2n} sqrt(2+l+|z|)  or  prod_n 2(1+l)/(2+l+|w|).
inline double bound_product_formula(const std::vector<double>& abs_eigs, double lambda, BoundKind kind) {
    double log_value = 0.0;
    const double log_num = std::log(2.0 * (1.0 + lambda));
    if (kind == BoundKind::GeneralSymplectic) {
        for (double z : abs_eigs) log_value += 0.5 * (log_num - std::log(2.0 + lambda + z));
    } else {
        for (double w : abs_eigs) log_value += log_num - std::log(2.0 + lambda + w);
    }
    return std::exp(log_value);
}

inline double recompute_value(const BoundResult& r) {
    return bound_product_formula(r.eigenvalues, r.lambda_used, r.kind);
}

namespace detail {

// Values within this relative distance count as ties; the earlier
// (lexicographically smaller) subset is kept.
inline constexpr double tie_rel = 1e-13;

inline std::vector<double> abs_sorted(std::vector<double> v) {
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end());
    return v;
}

template <typename Eval>
BoundResult minimize_over_subsets(int n, const SubsetPolicy& policy, const Tolerances& tol, BoundKind kind,
                                  double lambda, double lambda_used, Eval&& eval) {
    BoundResult best;
    best.kind = kind;
    best.lambda = lambda;
    best.lambda_used = lambda_used;
    const auto subsets = enumerate_subsets(n, policy, tol);
    best.subsets_examined = subsets.size();
    if (subsets.empty()) {
        best.subset = SignedModeMask(n);
        best.eigenvalues = eval(best.subset);
        best.value = bound_product_formula(best.eigenvalues, lambda_used, kind);
        return best;
    }
    bool have = false;
    for (const auto& J : subsets) {
        auto eigs = eval(J);
        const double v = bound_product_formula(eigs, lambda_used, kind);
        if (!have || v < best.value * (1.0 - tie_rel)) {
            best.value = v;
            best.subset = J;
            best.eigenvalues = std::move(eigs);
            have = true;
        }
    }
    return best;
}

}  // namespace detail

// |z_l| for a single J: eigenvalues of i[(1+l) S^{-1} Omega_J S^{-T} - Omega_J].
inline std::vector<double> rotated_omega_spectrum(const RMatrix& S_inv, const SignedModeMask& J, double lambda,
                                                  const Tolerances& tol = default_tolerances()) {
    const RMatrix OJ = J.omega_J();
    RMatrix A = (1.0 + lambda) * S_inv * OJ * S_inv.transpose() - OJ;
    A = 0.5 * (A - A.transpose()).eval();
    const CMatrix H = std::complex<double>(0.0, 1.0) * A.cast<std::complex<double>>();
    return hermitian_eigenvalues(H, tol);
}

inline BoundResult bound_general_symplectic(const SymplecticMatrix& S, const GaussianEnsemble& ens,
                                            const SubsetPolicy& policy = {},
                                            const Tolerances& tol = default_tolerances()) {
    if (ens.n != S.n()) throw Error(ErrorKind::InvalidArgument, "ensemble mode count differs from S");
    const double lam = ens.lambda_for_eigen(tol);
    const RMatrix S_inv = S.inverse_xxpp();
    return detail::minimize_over_subsets(S.n(), policy, tol, BoundKind::GeneralSymplectic, ens.lambda, lam,
                                         [&](const SignedModeMask& J) {
                                             return detail::abs_sorted(rotated_omega_spectrum(S_inv, J, lam, tol));
                                         });
}

inline void require_symmetric(const RMatrix& g) {
    if (g.rows() != g.cols() || (g - g.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw Error(ErrorKind::NotSymmetric, "coupling matrix is not symmetric");
}

// e^{i g t/2} from one real-symmetric eigendecomposition.
inline CMatrix half_phase_unitary(const RMatrix& g, double t) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
    const RMatrix& V = es.eigenvectors();
    Eigen::VectorXcd phases(g.rows());
    for (Eigen::Index k = 0; k < g.rows(); ++k)
        phases(k) = std::polar(1.0, es.eigenvalues()(k) * t / 2.0);
    const CMatrix Vc = V.cast<std::complex<double>>();
    return Vc * phases.asDiagonal() * Vc.transpose();
}

// |w_l| for a single J: eigenvalues of (1+l) U Xi_J U^dag - Xi_J.
inline std::vector<double> rotated_xi_spectrum(const CMatrix& U, const SignedModeMask& J, double lambda,
                                               const Tolerances& tol = default_tolerances()) {
    const Eigen::VectorXcd xi = J.xi_diagonal().cast<std::complex<double>>();
    CMatrix M = (1.0 + lambda) * U * xi.asDiagonal() * U.adjoint();
    M.diagonal() -= xi;
    M = 0.5 * (M + M.adjoint()).eval();
    return hermitian_eigenvalues(M, tol);
}

inline BoundResult bound_passive(const CouplingMatrix& c, double t, const GaussianEnsemble& ens,
                                 const SubsetPolicy& policy = {}, const Tolerances& tol = default_tolerances()) {
    require_symmetric(c.g);
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be >= 0");
    if (ens.n != c.n()) throw Error(ErrorKind::InvalidArgument, "ensemble mode count differs from g");
    const double lam = ens.lambda_for_eigen(tol);
    const CMatrix U = half_phase_unitary(c.g, t);
    auto r = detail::minimize_over_subsets(c.n(), policy, tol, BoundKind::Passive, ens.lambda, lam,
                                           [&](const SignedModeMask& J) {
                                               return detail::abs_sorted(rotated_xi_spectrum(U, J, lam, tol));
                                           });
    r.t = t;
    return r;
}

// (cos(gt/2), sin(gt/2); -sin(gt/2), cos(gt/2)) in xxpp ordering.
inline SymplecticMatrix build_Seff(const CouplingMatrix& c, double t, const Tolerances& tol = default_tolerances()) {
    require_symmetric(c.g);
    const int n = c.n();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(c.g);
    const RMatrix& V = es.eigenvectors();
    const RVector half = es.eigenvalues() * (t / 2.0);
    const RMatrix C = V * half.array().cos().matrix().asDiagonal() * V.transpose();
    const RMatrix Sn = V * half.array().sin().matrix().asDiagonal() * V.transpose();
    RMatrix S(2 * n, 2 * n);
    S << C, Sn, -Sn, C;
    return SymplecticMatrix(S, Ordering::XXPP, tol);
}

// f_{2,L} = 4(1+l)^2 / (2+l+sqrt(l^2 + 4(1+l) sin^2(gamma t)))^2.
inline double closed_form_two_line(double lambda, double gamma, double t) {
    if (!(lambda >= 0.0) || !(gamma > 0.0) || !(t >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "closed_form_two_line needs lambda >= 0, gamma > 0, t >= 0");
    const double s = std::sin(gamma * t);
    const double root = std::sqrt(lambda * lambda + 4.0 * (1.0 + lambda) * s * s);
    const double den = 2.0 + lambda + root;
    return 4.0 * (1.0 + lambda) * (1.0 + lambda) / (den * den);
}

// Spectral norm of e^{-w t Omega} e^{Omega (w I + g~) t} - S_eff(g, t), g~ = (g, 0; 0, 0).
inline double rwa_residual(const CouplingMatrix& c, double omega_rad, double t,
                           const Tolerances& tol = default_tolerances()) {
    if (!(omega_rad > 0.0)) throw Error(ErrorKind::InvalidArgument, "rwa_residual needs omega > 0");
    require_symmetric(c.g);
    const int n = c.n();
    const RMatrix I = RMatrix::Identity(n, n);
    RMatrix gen = RMatrix::Zero(2 * n, 2 * n);
    gen.topRightCorner(n, n) = omega_rad * I;
    gen.bottomLeftCorner(n, n) = -(omega_rad * I + c.g);
    const RMatrix evolved = matrix_exponential(gen * t, tol);
    const double th = omega_rad * t;
    const RMatrix back = std::cos(th) * RMatrix::Identity(2 * n, 2 * n) - std::sin(th) * omega(n);
    const RMatrix diff = back * evolved - build_Seff(c, t, tol).entries();
    return operator_norm(diff);
}

// Max of rwa_residual over `samples` points of one fast period [t, t + 2 pi/w).
// The pointwise residual oscillates with w t; its envelope carries the 1/w law.
inline double rwa_residual_envelope(const CouplingMatrix& c, double omega_rad, double t, int samples = 32,
                                    const Tolerances& tol = default_tolerances()) {
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "rwa_residual_envelope needs samples >= 1");
    const double period = 2.0 * std::numbers::pi / omega_rad;
    double env = 0.0;
    for (int s = 0; s < samples; ++s) env = std::max(env, rwa_residual(c, omega_rad, t + s * period / samples, tol));
    return env;
}

// ((1+l)/(2+l))^n, achieved by mode-wise heterodyne measure-and-prepare.
inline double heterodyne_lower_bound(const GaussianEnsemble& ens) {
    return std::pow((1.0 + ens.lambda) / (2.0 + ens.lambda), ens.n);
}

}  // namespace gravlocc
