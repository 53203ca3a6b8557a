#pragma once

// Short-time behaviour of the passive bound: sensitivity eta, the linear and
// lambda-aware expansions, rigorous remainders, and the equally spaced line.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gravlocc/config.hpp"
#include "gravlocc/gaussian_core.hpp"
#include "gravlocc/geometry.hpp"
#include "gravlocc/subsets.hpp"

namespace gravlocc {

struct SensitivityResult {
    double eta = 0.0;                     // rad/s
    SignedModeMask subset;                // maximizing J
    std::vector<double> singular_values;  // of g^{J,J^c}, rad/s, descending
    bool universal_bound_used = false;
    std::size_t subsets_examined = 0;
};

// Rows J, columns J^c of g.
inline RMatrix off_block(const RMatrix& g, const SignedModeMask& J) {
    const auto rows = J.members();
    const auto cols = J.non_members();
    RMatrix K(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) K(a, b) = g(rows[a], cols[b]);
    return K;
}

// (1/4) ||[g, Xi_J]||_1.
inline double commutator_sensitivity(const RMatrix& g, const SignedModeMask& J) {
    const RMatrix X = J.xi();
    return 0.25 * trace_norm(RMatrix(g * X - X * g));
}

// eta = max_J ||g^{J,J^c}||_1, which equals (1/4)||[g, Xi_J]||_1 because the
// commutator is twice the off-block placed antisymmetrically.
inline SensitivityResult sensitivity(const CouplingMatrix& c, const SubsetPolicy& policy = {},
                                     const Tolerances& tol = default_tolerances()) {
    SensitivityResult best;
    const auto subsets = enumerate_subsets(c.n(), policy, tol);
    best.subsets_examined = subsets.size();
    best.subset = SignedModeMask(c.n());
    bool have = false;
    for (const auto& J : subsets) {
        auto s = singular_values(off_block(c.g, J));
        double sum = 0.0;
        for (double x : s) sum += x;
        if (!have || sum > best.eta * (1.0 + 1e-13)) {
            best.eta = sum;
            best.subset = J;
            best.singular_values = std::move(s);
            have = true;
        }
    }
    return best;
}

struct ExpansionResult {
    double linear = 1.0;  // 1 - eta t
    double full = 1.0;    // 1 - max_J sum_l (sqrt(l^2 + t^2 s_l^2) - l)
    SignedModeMask subset_linear;
    SignedModeMask subset_full;
    bool in_regime = true;  // max{lambda, t ||g||_inf} <= 0.1
};

inline ExpansionResult expansion_upper_bound(const CouplingMatrix& c, double t, double lambda,
                                             const SubsetPolicy& policy = {},
                                             const Tolerances& tol = default_tolerances()) {
    ExpansionResult r;
    const auto subsets = enumerate_subsets(c.n(), policy, tol);
    r.subset_linear = r.subset_full = SignedModeMask(c.n());
    double best_lin = -1.0, best_full = -1.0;
    for (const auto& J : subsets) {
        const auto s = singular_values(off_block(c.g, J));
        double lin = 0.0, full = 0.0;
        for (double x : s) {
            lin += x * t;
            full += std::hypot(lambda, t * x) - lambda;
        }
        if (lin > best_lin * (1.0 + 1e-13) || best_lin < 0.0) {
            best_lin = lin;
            r.subset_linear = J;
        }
        if (full > best_full * (1.0 + 1e-13) || best_full < 0.0) {
            best_full = full;
            r.subset_full = J;
        }
    }
    r.linear = 1.0 - std::max(best_lin, 0.0);
    r.full = 1.0 - std::max(best_full, 0.0);
    r.in_regime = std::max(lambda, t * g_operator_norm(c)) <= 0.1;
    return r;
}

struct RemainderBudget {
    double delta_exact_g = 0.0;
    double delta_universal = 0.0;  // NaN when n < 2
    int n = 0;
    double lambda = 0.0;
    double t = 0.0;
    double g_norm = 0.0;
    double gamma = 0.0;
};

namespace detail {

// e^x - 1 - x without cancellation.
inline double expm1_minus_x(double x) {
    if (std::abs(x) < 1e-2) {
        double term = x * x / 2.0, sum = 0.0;
        for (int k = 3; k < 12; ++k) {
            sum += term;
            term *= x / k;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

// (n/2)(l(e^x - 1) + e^x - 1 - x) + (n^2/8) x^2.
inline double remainder_delta(int n, double lambda, double x) {
    const double nn = static_cast<double>(n);
    return nn / 2.0 * (lambda * std::expm1(x) + expm1_minus_x(x)) + nn * nn / 8.0 * x * x;
}

}  // namespace detail

inline RemainderBudget remainder_budget(int n, double lambda, double t, double g_norm, double gamma) {
    if (n < 1 || !(lambda >= 0.0) || !(t >= 0.0) || !(g_norm >= 0.0) || !(gamma >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "remainder_budget inputs must be nonnegative");
    RemainderBudget b{0.0, 0.0, n, lambda, t, g_norm, gamma};
    b.delta_exact_g = detail::remainder_delta(n, lambda, t * g_norm);
    b.delta_universal = n >= 2 ? detail::remainder_delta(n, lambda, gamma * t * universal_norm_factor(n))
                               : std::numeric_limits<double>::quiet_NaN();
    return b;
}

namespace detail {

inline std::complex<double> chi_series(int nu, std::complex<double> z) {
    const std::complex<double> z2 = z * z;
    std::complex<double> power = z, sum = 0.0;
    for (int l = 0; l < 100000; ++l) {
        const double k = 2.0 * l + 1.0;
        const std::complex<double> term = power / std::pow(k, nu);
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
        power *= z2;
    }
    return sum;
}

// Li_s(z) for integer s >= 2 and |z| <= 1.
inline std::complex<double> polylog(int s, std::complex<double> z) {
    using cd = std::complex<double>;
    if (z == cd(0.0)) return 0.0;
    if (std::abs(z) <= 0.5) {
        cd power = z, sum = 0.0;
        for (int k = 1; k < 200; ++k) {
            const cd term = power / std::pow(static_cast<double>(k), s);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= z;
        }
        return sum;
    }
    const cd mu = std::log(z);
    if (std::abs(mu) == 0.0) return std::riemann_zeta(static_cast<double>(s));
    // Li_s(e^mu) = sum_{k != s-1} zeta(s-k) mu^k/k! + mu^{s-1}/(s-1)! (H_{s-1} - ln(-mu)), |mu| < 2 pi.
    cd sum = 0.0;
    cd power = 1.0;
    double fact = 1.0;
    for (int k = 0; k <= s - 2; ++k) {
        sum += std::riemann_zeta(static_cast<double>(s - k)) * power / fact;
        power *= mu;
        fact *= k + 1;
    }
    double harmonic = 0.0;
    for (int k = 1; k <= s - 1; ++k) harmonic += 1.0 / k;
    sum += power / fact * (harmonic - std::log(-mu));
    // k = s: zeta(0) = -1/2.
    sum += -0.5 * power * mu / (fact * s);
    // k = s - 1 + 2m, m >= 1: zeta(1-2m) = (-1)^m 2 (2m)! zeta(2m) / ((2 pi)^{2m} 2m).
    const cd ratio = mu / (2.0 * std::numbers::pi);
    cd ratio_pow = 1.0;
    for (int m = 1; m < 200; ++m) {
        ratio_pow *= ratio * ratio;
        double inv = 1.0;  // (2m)!/(2m+s-1)!
        for (int i = 2 * m + 1; i <= 2 * m + s - 1; ++i) inv /= i;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const cd term = sign * 2.0 * std::riemann_zeta(2.0 * m) / (2.0 * m) * ratio_pow * power * inv;
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

}  // namespace detail

// chi_nu(z) = sum_{l>=0} z^{2l+1}/(2l+1)^nu = Li_nu(z) - 2^{-nu} Li_nu(z^2).
inline std::complex<double> legendre_chi(int nu, std::complex<double> z) {
    if (nu < 2) throw Error(ErrorKind::DomainError, "legendre_chi needs nu >= 2");
    if (std::abs(z) > 1.0 + 1e-15) throw Error(ErrorKind::DomainError, "legendre_chi needs |z| <= 1");
    if (std::abs(z) <= 0.75) return detail::chi_series(nu, z);
    return detail::polylog(nu, z) - std::ldexp(1.0, -nu) * detail::polylog(nu, z * z);
}

// (1/2pi) int_{-pi}^{pi} |1 + e^{-i phi/2} chi_3(e^{-i phi/2})| dphi.
inline double zeta_line(double tolerance = 1e-10) {
    const auto f = [](double phi) {
        const std::complex<double> u = std::polar(1.0, -phi / 2.0);
        return std::abs(1.0 + u * legendre_chi(3, u)) / (2.0 * std::numbers::pi);
    };
    using boost::math::quadrature::gauss_kronrod;
    double err_lo = 0.0, err_hi = 0.0;
    const double lo = gauss_kronrod<double, 61>::integrate(f, -std::numbers::pi, 0.0, 20, tolerance, &err_lo);
    const double hi = gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 20, tolerance, &err_hi);
    if (err_lo + err_hi > 1e-6) throw Error(ErrorKind::QuadratureFailure, "zeta_line error estimate too large");
    return lo + hi;
}

// K_ij = 2/|2(i-j)-1|^3 (gamma = 1): coupling between odd and even sites of
// the aligned line.
inline RMatrix line_K_matrix(int n) {
    if (n < 2 || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "line K matrix needs even n");
    const int h = n / 2;
    RMatrix K(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            const double d = std::abs(2.0 * (i - j) - 1.0);
            K(i, j) = 2.0 / (d * d * d);
        }
    return K;
}

inline double line_trace_norm_ratio(int n) {
    if (n < 4 || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "line_trace_norm_ratio needs even n >= 4");
    return trace_norm(line_K_matrix(n)) / n;
}

}  // namespace gravlocc
