#pragma once

// The four batch commands. Each returns a process exit code:
//   0 ok, 1 a check was marginal or failed, 2 config/parameter error,
//   3 numerical failure.

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gravlocc/cli/config.hpp"
#include "gravlocc/experiment.hpp"
#include "gravlocc/finite_dim.hpp"
#include "gravlocc/geometry.hpp"
#include "gravlocc/locc_bound.hpp"
#include "gravlocc/short_time.hpp"
#include "gravlocc/subsets.hpp"

namespace gravlocc::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os, const std::string& format) const {
        if (format == "table") {
            std::vector<std::size_t> width(header.size(), 0);
            for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
            for (const auto& r : rows)
                for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
            auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t c = 0; c < r.size(); ++c)
                    os << std::left << std::setw(static_cast<int>(width[c])) << r[c] << (c + 1 < r.size() ? "  " : "\n");
            };
            line(header);
            for (const auto& r : rows) line(r);
            return;
        }
        auto field = [](const std::string& s) {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        };
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c) os << field(r[c]) << (c + 1 < r.size() ? "," : "\n");
        };
        line(header);
        for (const auto& r : rows) line(r);
    }
};

inline std::string fmt(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

namespace detail {

struct Failure {
    int code;
    std::string message;
};

// Runs `setup` (errors -> exit 2) and then `compute` (gravlocc errors -> exit 3).
inline int run_guarded(std::ostream& err, const std::function<void()>& setup, const std::function<int()>& compute,
                       const std::string& op) {
    try {
        setup();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "parameter error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        return compute();
    } catch (const Failure& f) {
        err << f.message << "\n";
        return f.code;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::MissingParameter) {
            err << "missing parameters: " << e.what() << "\n";
            return kConfigError;
        }
        err << op << ": numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError(what);
}

}  // namespace detail

inline int cmd_bound(const RunConfig& cfg, const std::string& base_dir, Table& out, std::ostream& err) {
    CouplingMatrix c{};
    SubsetPolicy policy;
    std::vector<double> times;
    double lambda = 0.0;
    return detail::run_guarded(
        err,
        [&] {
            detail::require(cfg.geometry.has_value(), "bound: config needs a geometry section");
            detail::require(cfg.lambda.has_value(), "bound: config needs ensemble.lambda");
            detail::require(cfg.time.has_value(), "bound: config needs a time section");
            c = build_coupling(*cfg.geometry, base_dir);
            policy = parse_subset_policy(cfg.subset_policy, cfg.seed);
            lambda = *cfg.lambda;
            for (double x : cfg.time->points()) {
                if (cfg.time->unit == TimeGrid::Unit::GammaT) {
                    detail::require(c.gamma > 0.0, "bound: gamma_t grid needs gamma > 0");
                    times.push_back(x / c.gamma);
                } else {
                    times.push_back(x);
                }
            }
        },
        [&] {
            const int p = cfg.output.precision;
            const GaussianEnsemble ens(c.n(), lambda);
            const double het = heterodyne_lower_bound(ens);
            const double g_norm = g_operator_norm(c);
            const double eta = sensitivity(c, policy).eta;
            out.header = {"t_seconds", "gamma_t", "lambda", "bound_value", "min_subset",
                          "heterodyne_lb", "linear_expansion", "delta_budget"};
            for (double t : times) {
                const auto r = bound_passive(c, t, ens, policy);
                if (!(het <= r.value + 1e-12 && r.value <= 1.0 + 1e-12))
                    throw detail::Failure{kNumericalFailure, "bound_passive: row invariant heterodyne <= bound <= 1 violated at t = " +
                                                                 fmt(t, 17)};
                const auto budget = remainder_budget(c.n(), lambda, t, g_norm, c.gamma);
                out.rows.push_back({fmt(t, p), fmt(c.gamma * t, p), fmt(lambda, p), fmt(r.value, p), r.subset.bitstring(),
                                    fmt(het, p), fmt(1.0 - eta * t, p), fmt(budget.delta_exact_g, p)});
            }
            return int(kOk);
        },
        "bound_passive");
}

inline int cmd_sensitivity(const RunConfig& cfg, const std::string& base_dir, Table& out, std::ostream& err) {
    CouplingMatrix c{};
    SubsetPolicy policy;
    bool is_line = false;
    return detail::run_guarded(
        err,
        [&] {
            detail::require(cfg.geometry.has_value(), "sensitivity: config needs a geometry section");
            c = build_coupling(*cfg.geometry, base_dir);
            policy = parse_subset_policy(cfg.subset_policy, cfg.seed);
            is_line = cfg.geometry->kind == GeometryConfig::Kind::Line;
        },
        [&] {
            const int p = cfg.output.precision;
            const auto s = sensitivity(c, policy);
            std::string sv;
            for (double x : s.singular_values) sv += (sv.empty() ? "" : ";") + fmt(x, p);
            const int n = c.n();
            const std::string ratio = c.gamma > 0.0 ? fmt(s.eta / (n * c.gamma), p) : "";
            const std::string universal = n >= 2 ? fmt(c.gamma * universal_norm_factor(n), p) : "";
            out.header = {"n", "gamma", "eta", "eta_over_n_gamma", "maximizing_subset", "singular_values",
                          "g_norm", "g_norm_universal_bound", "zeta_line_reference", "subsets_examined"};
            out.rows.push_back({std::to_string(n), fmt(c.gamma, p), fmt(s.eta, p), ratio, s.subset.bitstring(), sv,
                                fmt(g_operator_norm(c), p), universal, is_line ? fmt(zeta_line(), p) : "",
                                std::to_string(s.subsets_examined)});
            return int(kOk);
        },
        "sensitivity");
}

inline int cmd_check(const RunConfig& cfg, Table& out, std::ostream& err) {
    return detail::run_guarded(
        err, [&] { detail::require(cfg.experiment.has_value(), "check: config needs an experiment section"); },
        [&] {
            const int p = cfg.output.precision;
            CheckReport rep;
            if (cfg.experiment->kind == ExperimentConfig::Kind::Oscillators) {
                rep = check_assumptions(cfg.experiment->params, cfg.margin);
                rep.append(noise_budget(cfg.experiment->params, cfg.margin));
            } else {
                rep = pendulum_feasibility(cfg.experiment->params, cfg.margin);
            }
            if (!rep.missing.empty()) {
                std::string msg;
                for (const auto& m : rep.missing) msg += (msg.empty() ? "" : ", ") + m;
                throw detail::Failure{kConfigError, "missing parameters: " + msg};
            }
            out.header = {"kind", "name", "lhs", "rhs", "unit", "ratio", "margin", "verdict", "note"};
            for (const auto& v : rep.values)
                out.rows.push_back({"value", v.name, fmt(v.value.value(), p), "", v.value.unit(), "", "", "", v.note});
            for (const auto& ch : rep.checks)
                out.rows.push_back({"check", ch.name, fmt(ch.lhs.value(), p), fmt(ch.rhs.value(), p), ch.lhs.unit(),
                                    fmt(ch.ratio, p), ch.relation == Relation::MuchLess ? fmt(ch.margin, p) : "1",
                                    to_string(ch.verdict), ch.note});
            return int(rep.all_pass() ? kOk : kCheckFailed);
        },
        "check");
}

inline const std::vector<double>& benchmark_lambdas() {
    static const std::vector<double> l = {0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0};
    return l;
}

inline int cmd_benchmarks(const RunConfig& cfg, Table& out, std::ostream& err) {
    return detail::run_guarded(
        err, [] {},
        [&] {
            const int p = cfg.output.precision;
            out.header = {"benchmark", "parameter", "value", "closed_form", "abs_diff"};
            for (int d = 2; d <= 8; ++d) {
                const double v = swap_bound(d);
                const double closed = 4.0 / ((d + 1.0) * (d + 1.0));
                if (std::abs(v - closed) > 1e-10)
                    throw detail::Failure{kNumericalFailure, "swap_bound cross-check failed at d = " + std::to_string(d)};
                out.rows.push_back({"swap_bound", "d=" + std::to_string(d), fmt(v, p), fmt(closed, p), fmt(std::abs(v - closed), p)});
            }
            for (double lam : benchmark_lambdas()) {
                const auto r = teleportation_threshold_bound(FiniteEnsembleSpec{GaussianWeight{lam}, 20});
                const double closed = (1.0 + lam) / (2.0 + lam);
                if (std::abs(r.value - closed) > 1e-9)
                    throw detail::Failure{kNumericalFailure, "teleportation threshold cross-check failed at lambda = " + fmt(lam, 17)};
                out.rows.push_back({"teleportation_threshold", "lambda=" + fmt(lam, 6), fmt(r.value, p), fmt(closed, p),
                                    fmt(std::abs(r.value - closed), p)});
            }
            return int(kOk);
        },
        "benchmarks");
}

}  // namespace gravlocc::cli
