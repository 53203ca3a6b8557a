#pragma once

// Gravitational coupling matrix g of n one-dimensional oscillators.
// SI units throughout; frequencies are angular (rad/s).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gravlocc/config.hpp"
#include "gravlocc/gaussian_core.hpp"

namespace gravlocc {

namespace constants {
inline constexpr double G = 6.6743e-11;
}

using Vec3 = Eigen::Vector3d;

struct Oscillator {
    Vec3 center;                  // m
    Vec3 axis;                    // unit vector
    double mass = 0.0;            // kg
    std::optional<double> omega;  // rad/s, per-oscillator override
};

class OscillatorArray {
public:
    OscillatorArray(std::vector<Oscillator> oscillators, std::optional<double> common_omega,
                    const Tolerances& tol = default_tolerances())
        : osc_(std::move(oscillators)) {
        if (osc_.empty()) throw Error(ErrorKind::InvalidArgument, "empty oscillator array");
        for (std::size_t j = 0; j < osc_.size(); ++j) {
            const auto& o = osc_[j];
            if (!o.center.allFinite() || !o.axis.allFinite())
                throw Error(ErrorKind::InvalidArgument, "non-finite geometry for oscillator " + std::to_string(j + 1));
            if (std::abs(o.axis.norm() - 1.0) > tol.unit_axis)
                throw Error(ErrorKind::InvalidArgument, "axis of oscillator " + std::to_string(j + 1) + " is not a unit vector");
            if (!(o.mass > 0.0))
                throw Error(ErrorKind::InvalidArgument, "mass of oscillator " + std::to_string(j + 1) + " must be positive");
            if (o.omega && !(*o.omega > 0.0))
                throw Error(ErrorKind::InvalidArgument, "frequency of oscillator " + std::to_string(j + 1) + " must be positive");
            for (std::size_t k = 0; k < j; ++k)
                if (!((osc_[k].center - o.center).norm() > 0.0))
                    throw Error(ErrorKind::CoincidentCenters,
                                "oscillators " + std::to_string(k + 1) + " and " + std::to_string(j + 1));
        }
        if (common_omega) {
            if (!(*common_omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
            omega_ = *common_omega;
        } else {
            // Heterogeneous frequencies: accepted only within the relative spread threshold.
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
            for (const auto& o : osc_) {
                if (!o.omega) throw Error(ErrorKind::MissingCommonFrequency, "no common frequency and oscillator without one");
                lo = std::min(lo, *o.omega);
                hi = std::max(hi, *o.omega);
                sum += *o.omega;
            }
            const double mean = sum / static_cast<double>(osc_.size());
            if ((hi - lo) / mean >= tol.freq_spread)
                throw Error(ErrorKind::MissingCommonFrequency,
                            "relative frequency spread " + std::to_string((hi - lo) / mean) + " exceeds threshold");
            omega_ = mean;
        }
    }

    int n() const { return static_cast<int>(osc_.size()); }
    const Oscillator& operator[](int j) const { return osc_.at(static_cast<std::size_t>(j)); }
    const std::vector<Oscillator>& oscillators() const { return osc_; }
    double omega() const { return omega_; }

    double distance(int j, int k) const { return (osc_.at(k).center - osc_.at(j).center).norm(); }

    double min_distance() const {
        double d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n(); ++j)
            for (int k = j + 1; k < n(); ++k) d = std::min(d, distance(j, k));
        return d;
    }
    double max_mass() const {
        double m = 0.0;
        for (const auto& o : osc_) m = std::max(m, o.mass);
        return m;
    }

    // gamma = G max m / (min d^3 omega). Zero for a single oscillator.
    double gamma() const {
        if (n() < 2) return 0.0;
        const double d = min_distance();
        return constants::G * max_mass() / (d * d * d * omega_);
    }

private:
    std::vector<Oscillator> osc_;
    double omega_ = 0.0;
};

// Two oscillators at distance d, both axes along the joining line.
inline OscillatorArray aligned_pair(double d, double m, double omega) {
    return OscillatorArray({{Vec3(0, 0, 0), Vec3(1, 0, 0), m, std::nullopt},
                            {Vec3(d, 0, 0), Vec3(1, 0, 0), m, std::nullopt}},
                           omega);
}

// n equally spaced oscillators on the x axis, axes along the line.
inline OscillatorArray aligned_line(int n, double d, double m, double omega) {
    std::vector<Oscillator> osc;
    for (int j = 0; j < n; ++j) osc.push_back({Vec3(j * d, 0, 0), Vec3(1, 0, 0), m, std::nullopt});
    return OscillatorArray(std::move(osc), omega);
}

// `count` aligned pairs, pair k displaced by k*spacing along y.
inline OscillatorArray disjoint_pairs(int count, double d, double m, double omega, double spacing) {
    std::vector<Oscillator> osc;
    for (int k = 0; k < count; ++k) {
        osc.push_back({Vec3(0, k * spacing, 0), Vec3(1, 0, 0), m, std::nullopt});
        osc.push_back({Vec3(d, k * spacing, 0), Vec3(1, 0, 0), m, std::nullopt});
    }
    return OscillatorArray(std::move(osc), omega);
}

struct PairAngles {
    double theta_jk;
    double theta_kj;
    double phi_jk;
};

inline double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

// cos theta_jk = n_j.d_jk, -cos theta_kj = n_k.d_jk, cos phi_jk = n_j.n_k,
// d_jk = (R_k - R_j)/|R_k - R_j|.
inline PairAngles pair_angles(const OscillatorArray& arr, int j, int k) {
    if (j < 0 || k < 0 || j >= arr.n() || k >= arr.n())
        throw Error(ErrorKind::IndexOutOfRange, "pair_angles index");
    if (j == k) throw Error(ErrorKind::InvalidArgument, "pair_angles requires j != k");
    const Vec3 diff = arr[k].center - arr[j].center;
    const double d = diff.norm();
    if (!(d > 0.0)) throw Error(ErrorKind::CoincidentCenters, "pair_angles");
    const Vec3 dhat = diff / d;
    return {clamped_acos(arr[j].axis.dot(dhat)), clamped_acos(-arr[k].axis.dot(dhat)),
            clamped_acos(arr[j].axis.dot(arr[k].axis))};
}

struct CouplingMatrix {
    RMatrix g;     // rad/s
    double gamma;  // rad/s

    int n() const { return static_cast<int>(g.rows()); }
};

inline CouplingMatrix build_coupling_matrix(const OscillatorArray& arr) {
    const int n = arr.n();
    const double w = arr.omega();
    RMatrix g = RMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const Vec3 diff = arr[k].center - arr[j].center;
            const double d = diff.norm();
            const Vec3 dhat = diff / d;
            const double d3w = d * d * d * w;
            const double cj = arr[j].axis.dot(dhat);    // cos theta_jk
            const double ck = -arr[k].axis.dot(dhat);   // cos theta_kj
            const double cphi = arr[j].axis.dot(arr[k].axis);
            const double off = -constants::G * std::sqrt(arr[j].mass * arr[k].mass) / d3w * (cphi + 3.0 * cj * ck);
            g(j, k) = off;
            g(k, j) = off;
            g(j, j) += constants::G * arr[k].mass / d3w * (1.0 - 3.0 * cj * cj);
            g(k, k) += constants::G * arr[j].mass / d3w * (1.0 - 3.0 * ck * ck);
        }
    }
    return {g, arr.gamma()};
}

// Wraps a user-supplied symmetric g. gamma defaults to max |g_jk|/2 over j != k.
inline CouplingMatrix coupling_from_matrix(const RMatrix& g, std::optional<double> gamma = std::nullopt) {
    if (g.rows() != g.cols() || g.rows() == 0) throw Error(ErrorKind::NotSymmetric, "g must be square");
    if (!g.allFinite()) throw Error(ErrorKind::InvalidArgument, "g has non-finite entries");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 0.0) throw Error(ErrorKind::NotSymmetric, "g is not symmetric");
    double gam = 0.0;
    if (gamma) {
        gam = *gamma;
    } else {
        for (Eigen::Index j = 0; j < g.rows(); ++j)
            for (Eigen::Index k = 0; k < g.cols(); ++k)
                if (j != k) gam = std::max(gam, std::abs(g(j, k)) / 2.0);
    }
    return {g, gam};
}

// ||g||_inf = max |eigenvalue|.
inline double g_operator_norm(const CouplingMatrix& c) {
    const auto ev = symmetric_eigenvalues(c.g);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

// min{6(n-1), 288 ln(n-1) + 966} in units of gamma.
inline double universal_norm_factor(int n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "universal norm bound requires n >= 2");
    const double nm1 = static_cast<double>(n - 1);
    return std::min(6.0 * nm1, 288.0 * std::log(nm1) + 966.0);
}

inline double g_norm_universal_bound(const OscillatorArray& arr) {
    return arr.gamma() * universal_norm_factor(arr.n());
}

}  // namespace gravlocc
