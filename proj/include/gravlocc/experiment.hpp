#pragma once

// Feasibility checks for gravitationally coupled oscillator experiments:
// modelling assumptions, runtime, noise budgets and the torsion-pendulum
// variant. Every formula is evaluated on unit-tagged quantities and each
// check asserts that both sides carry the same SI unit.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gravlocc/config.hpp"
#include "gravlocc/units.hpp"

namespace gravlocc {

namespace si {
using units::one;
inline const Quantity G{6.6743e-11, dim(-1, 3, -2)};
inline const Quantity hbar{1.054571817e-34, dim(1, 2, -1)};
inline const Quantity k_B{1.380649e-23, dim(1, 2, -2, -1)};
inline const Quantity c{2.99792458e8, dim(0, 1, -1)};
inline const Quantity sigma_SB{5.670374419e-8, dim(1, 0, -3, -4)};
inline const Quantity mu0{4e-7 * std::numbers::pi, dim(1, 1, -2, 0, -2)};
inline const Quantity eps0 = 1.0 / (mu0 * c * c);
inline const Quantity wien_b{2.898e-3, dim(0, 1, 0, 1)};
inline const Quantity m_H2{3.347e-27, units::kg};
inline const Quantity m_Planck{2.18e-8, units::kg};
}  // namespace si

// All fields optional; each check lists what it needs. Frequencies are
// angular (rad/s) unless omega_is_hz is set, in which case omega,
// delta_omega and omega_I are multiplied by 2 pi on use.
struct ExperimentParams {
    std::optional<double> n;
    std::optional<double> m;            // kg; derived from R and rho when absent
    std::optional<double> d;            // m
    std::optional<double> R;            // m
    std::optional<double> omega;        // rad/s
    std::optional<double> delta_omega;  // rad/s
    std::optional<double> lambda;
    std::optional<double> t;            // s
    std::optional<double> target_fidelity;  // runtime estimate target, default 0.9
    std::optional<double> epsilon;      // relative permittivity
    std::optional<double> rho;          // kg/m^3
    // noise
    std::optional<double> mu;           // fluctuating mass, kg
    std::optional<double> delta_t;      // duration of the fluctuation, s
    std::optional<double> P2;           // tolerated error probability
    std::optional<double> delta;        // actual distance of the fluctuating mass, m
    std::optional<double> P;            // gas pressure, Pa
    std::optional<double> T_env;        // gas / radiation temperature, K
    std::optional<double> alpha_amp;    // coherent amplitude |alpha|
    std::optional<double> chi;          // magnetic susceptibility
    std::optional<double> B;            // T
    std::optional<double> dBdx;         // T/m
    std::optional<double> E;            // V/m
    std::optional<double> dEdx;         // V/m^2
    // torsion pendulum
    std::optional<double> a;            // arm length, m
    std::optional<double> omega_I;      // rad/s
    std::optional<double> tau;          // torsion constant, N m/rad
    std::optional<double> Q;
    std::optional<double> T_th;         // bath temperature, K
    std::optional<double> d_s;          // sphere-shield distance, m
    std::optional<double> P_circ;       // W
    std::optional<double> omega_L;      // rad/s
    std::optional<double> L_cav;        // m
    std::optional<double> kappa;        // rad/s
    bool omega_is_hz = false;

    friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

enum class Relation { MuchLess, Less };
enum class Verdict { Pass, Marginal, Fail };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Marginal: return "marginal";
        case Verdict::Fail: return "fail";
    }
    return "fail";
}

struct CheckEntry {
    std::string name;
    Quantity lhs;
    Quantity rhs;
    Relation relation = Relation::MuchLess;
    double margin = 0.1;
    double ratio = 0.0;
    Verdict verdict = Verdict::Pass;
    std::string note;
};

struct ReportedValue {
    std::string name;
    Quantity value;
    std::string note;
};

struct CheckReport {
    std::vector<CheckEntry> checks;
    std::vector<ReportedValue> values;
    std::vector<std::string> missing;  // "subcheck: param" for skipped sub-checks

    bool all_pass() const {
        for (const auto& c : checks)
            if (c.verdict != Verdict::Pass) return false;
        return true;
    }
    const CheckEntry* find_check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    const ReportedValue* find_value(const std::string& name) const {
        for (const auto& v : values)
            if (v.name == name) return &v;
        return nullptr;
    }
    void append(const CheckReport& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
        values.insert(values.end(), o.values.begin(), o.values.end());
        missing.insert(missing.end(), o.missing.begin(), o.missing.end());
    }
};

// "lhs << rhs": pass if lhs/rhs <= margin, marginal up to 1, fail above.
// "lhs < rhs": pass if lhs/rhs < 1.
inline CheckEntry make_check(std::string name, const Quantity& lhs, const Quantity& rhs, Relation rel, double margin,
                             std::string note = {}) {
    Quantity::require_same(lhs, rhs, name.c_str());
    CheckEntry e{std::move(name), lhs, rhs, rel, margin, 0.0, Verdict::Pass, std::move(note)};
    if (rhs.value() > 0.0) e.ratio = lhs.value() / rhs.value();
    else e.ratio = lhs.value() > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (!(e.ratio >= 0.0)) e.ratio = std::numeric_limits<double>::infinity();
    if (rel == Relation::MuchLess)
        e.verdict = e.ratio <= margin ? Verdict::Pass : (e.ratio <= 1.0 ? Verdict::Marginal : Verdict::Fail);
    else
        e.verdict = e.ratio < 1.0 ? Verdict::Pass : Verdict::Fail;
    return e;
}

namespace detail {

class ParamReader {
public:
    ParamReader(const ExperimentParams& p, std::string scope) : p_(p), scope_(std::move(scope)) {}

    Quantity get(const std::optional<double>& v, const char* name, const Dim& d) {
        if (!v) {
            missing_.push_back(scope_ + ": " + name);
            return Quantity(std::numeric_limits<double>::quiet_NaN(), d);
        }
        return {*v, d};
    }
    Quantity angular(const std::optional<double>& v, const char* name) {
        Quantity q = get(v, name, units::per_s);
        return p_.omega_is_hz ? 2.0 * std::numbers::pi * q : q;
    }
    // m, or (4/3) pi R^3 rho.
    Quantity mass() {
        if (p_.m) return {*p_.m, units::kg};
        if (p_.R && p_.rho) return sphere_mass(*p_.R, *p_.rho);
        missing_.push_back(scope_ + ": m (or R and rho)");
        return Quantity(std::numeric_limits<double>::quiet_NaN(), units::kg);
    }
    static Quantity sphere_mass(double R, double rho) {
        const Quantity r{R, units::m};
        return 4.0 / 3.0 * std::numbers::pi * pow(r, 3) * Quantity{rho, units::kg_per_m3};
    }
    bool ok() const { return missing_.empty(); }
    const std::vector<std::string>& missing() const { return missing_; }

private:
    const ExperimentParams& p_;
    std::string scope_;
    std::vector<std::string> missing_;
};

inline void throw_missing(const std::vector<std::string>& missing) {
    std::string msg;
    for (const auto& m : missing) msg += (msg.empty() ? "" : ", ") + m;
    throw Error(ErrorKind::MissingParameter, msg);
}

}  // namespace detail

inline Quantity sphere_mass(double R, double rho) { return detail::ParamReader::sphere_mass(R, rho); }

// gamma = G m / (d^3 omega).
inline Quantity coupling_gamma(const ExperimentParams& p) {
    detail::ParamReader r(p, "gamma");
    const Quantity m = r.mass(), d = r.get(p.d, "d", units::m), w = r.angular(p.omega, "omega");
    if (!r.ok()) detail::throw_missing(r.missing());
    return si::G * m / (pow(d, 3) * w);
}

struct LambdaWindow {
    Quantity lower;  // n hbar / (m d^2 omega)
    Quantity upper;  // G m t / (d^3 omega)
};

inline LambdaWindow lambda_window(const ExperimentParams& p) {
    detail::ParamReader r(p, "lambda window");
    const Quantity n = r.get(p.n, "n", units::one), m = r.mass(), d = r.get(p.d, "d", units::m),
                   w = r.angular(p.omega, "omega"), t = r.get(p.t, "t", units::s);
    if (!r.ok()) detail::throw_missing(r.missing());
    return {n * si::hbar / (m * d * d * w), si::G * m * t / (pow(d, 3) * w)};
}

// t ~ (1 - F) d^3 omega / (n G m).
inline Quantity runtime_estimate(const ExperimentParams& p, double target_bound) {
    if (!(target_bound > 0.0 && target_bound < 1.0 + 1e-15))
        throw Error(ErrorKind::InvalidArgument, "runtime_estimate needs 0 < F <= 1");
    detail::ParamReader r(p, "runtime");
    const Quantity n = r.get(p.n, "n", units::one), m = r.mass(), d = r.get(p.d, "d", units::m),
                   w = r.angular(p.omega, "omega");
    if (!r.ok()) detail::throw_missing(r.missing());
    return (1.0 - target_bound) * pow(d, 3) * w / (n * si::G * m);
}

inline CheckReport check_assumptions(const ExperimentParams& p, double margin = 0.1) {
    detail::ParamReader r(p, "assumptions");
    const Quantity n = r.get(p.n, "n", units::one), m = r.mass(), d = r.get(p.d, "d", units::m),
                   R = r.get(p.R, "R", units::m), w = r.angular(p.omega, "omega"),
                   dw = r.angular(p.delta_omega, "delta_omega"), lam = r.get(p.lambda, "lambda", units::one),
                   t = r.get(p.t, "t", units::s), eps = r.get(p.epsilon, "epsilon", units::one);
    if (!r.ok()) detail::throw_missing(r.missing());

    const Quantity unity{1.0};
    const Quantity Gm_d3 = si::G * m / pow(d, 3);
    const Quantity gamma = Gm_d3 / w;
    const Quantity gap = d - 2.0 * R;
    const double cm = (eps.value() - 1.0) / (eps.value() + 2.0);
    const Quantity casimir = 207.0 / (36.0 * std::numbers::pi) * cm * cm * pow(si::m_Planck / m, 2) * pow(R, 6);
    const Quantity gap6 = gap.value() > 0.0 ? pow(gap, 6) : Quantity(0.0, units::m.scaled(6, 1));

    CheckReport rep;
    auto add = [&](const char* name, const Quantity& lhs, const Quantity& rhs, const char* note = "") {
        rep.checks.push_back(make_check(name, lhs, rhs, Relation::MuchLess, margin, note));
    };
    add("I: oscillation amplitude << d", sqrt(n * si::hbar / (lam * m * w)), d);
    add("II: R << d", R, d);
    add("II: Casimir term << (d-2R)^6", casimir, gap6);
    add("III': delta_omega/omega << Gm/(d^3 omega^2)", dw / w, Gm_d3 / (w * w));
    add("III': Gm/(d^3 omega^2) << 1", Gm_d3 / (w * w), unity);
    add("IV: lambda << 1", lam, unity);
    add("IV: n gamma t << 1", n * gamma * t, unity);
    add("IV': n hbar/(m d^2 omega) << lambda", n * si::hbar / (m * d * d * w), lam);
    add("IV': lambda << gamma t", lam, gamma * t);
    add("IV': gamma t << 1/n", gamma * t, unity / n);
    add("IV': n hbar d/(G m^2) << t", n * si::hbar * d / (si::G * m * m), t);

    const double F = p.target_fidelity.value_or(0.9);
    rep.values.push_back({"m", m, p.m ? "given" : "(4/3) pi R^3 rho"});
    rep.values.push_back({"sqrt(Gm/d^3)", sqrt(Gm_d3), "rad/s"});
    rep.values.push_back({"Gm/d^3", Gm_d3, "rad^2/s^2"});
    rep.values.push_back({"gamma", gamma, "G m/(d^3 omega)"});
    rep.values.push_back({"lambda window lower", n * si::hbar / (m * d * d * w), ""});
    rep.values.push_back({"lambda window upper", gamma * t, ""});
    rep.values.push_back({"runtime estimate", (1.0 - F) * pow(d, 3) * w / (n * si::G * m),
                          "(1-F) d^3 omega/(n G m), F = " + std::to_string(F)});
    return rep;
}

inline CheckReport noise_budget(const ExperimentParams& p, double margin = 0.1) {
    CheckReport rep;
    const Quantity unity{1.0};

    {
        // Fluctuating mass mu appearing at distance delta for a time delta_t,
        // all of it placed at the end of the run (order-of-magnitude model).
        detail::ParamReader r(p, "mass fluctuation");
        const Quantity n = r.get(p.n, "n", units::one), m = r.mass(), t = r.get(p.t, "t", units::s),
                       w = r.angular(p.omega, "omega"), mu = r.get(p.mu, "mu", units::kg),
                       dt = r.get(p.delta_t, "delta_t", units::s);
        const double P2 = p.P2.value_or(0.1);
        if (r.ok()) {
            const Quantity k = si::G * mu * sqrt(m * t * dt / (3.0 * si::hbar * w));  // ||v|| delta^2
            const double v_max = std::sqrt(-2.0 * std::log(1.0 - P2) / n.value());
            rep.values.push_back({"mass fluctuation: minimum distance", sqrt(k / v_max),
                                  "P1 = 1 - exp(-n ||v||^2/2) < P2 = " + std::to_string(P2) + "; order of magnitude"});
            if (p.delta) {
                const Quantity dl{*p.delta, units::m};
                const double v = (k / (dl * dl)).in(units::one);
                const double P1 = -std::expm1(-n.value() * v * v / 2.0);
                rep.checks.push_back(make_check("mass fluctuation: P1 < P2", Quantity(P1), Quantity(P2), Relation::Less,
                                                margin, "order of magnitude"));
            }
        }
        rep.missing.insert(rep.missing.end(), r.missing().begin(), r.missing().end());
    }
    {
        detail::ParamReader r(p, "gas collisions");
        const Quantity m = r.mass(), R = r.get(p.R, "R", units::m), t = r.get(p.t, "t", units::s),
                       w = r.angular(p.omega, "omega");
        if (r.ok()) {
            // |Delta alpha|^2 = pi R^2 t P sqrt(m0 k T)/(hbar m omega) = P sqrt(T) / C.
            const Quantity C = si::hbar * m * w / (std::numbers::pi * R * R * t * sqrt(si::m_H2 * si::k_B));
            rep.values.push_back({"gas collisions: P sqrt(T) threshold", C, "Pa K^1/2"});
            if (p.P && p.T_env) {
                const Quantity P{*p.P, units::Pa}, T{*p.T_env, units::K};
                rep.checks.push_back(make_check("gas collisions: |Delta alpha|^2 << 1", P * sqrt(T) / C, unity,
                                                Relation::MuchLess, margin));
                const Quantity eta2 = si::m_H2 * si::k_B * T / (2.0 * m * si::hbar * w);
                const double alpha2 = p.alpha_amp ? *p.alpha_amp * *p.alpha_amp : 0.0;
                rep.values.push_back({"gas collisions: Lamb-Dicke p", eta2 * (2.0 * alpha2 + 1.0),
                                      "eta^2 (2|alpha|^2+1), informational"});
            }
        }
        rep.missing.insert(rep.missing.end(), r.missing().begin(), r.missing().end());
    }
    {
        detail::ParamReader r(p, "black body");
        const Quantity m = r.mass(), R = r.get(p.R, "R", units::m), t = r.get(p.t, "t", units::s),
                       w = r.angular(p.omega, "omega"), amp = r.get(p.alpha_amp, "alpha_amp", units::one);
        if (r.ok()) {
            // p = 4 pi^2 sigma R^2 T^5 (|alpha|^2+1) t / (b m c omega) = (T/T_max)^5.
            const Quantity coef =
                4.0 * std::numbers::pi * std::numbers::pi * si::sigma_SB * R * R * (amp * amp + Quantity(1.0)) * t /
                (si::wien_b * m * si::c * w);
            const Quantity T_max = pow(1.0 / coef, 1, 5);
            rep.values.push_back({"black body: temperature threshold", T_max, "p = 1"});
            const Quantity T_ld = sqrt(m * w * si::wien_b * si::wien_b / (2.0 * std::numbers::pi * std::numbers::pi * si::hbar));
            rep.values.push_back({"black body: Lamb-Dicke temperature", T_ld, ""});
            if (p.T_env) {
                const Quantity T{*p.T_env, units::K};
                rep.checks.push_back(make_check("black body: p << 1", coef * pow(T, 5), unity, Relation::MuchLess, margin));
                rep.checks.push_back(make_check("black body: Lamb-Dicke T << T_LD", T, T_ld, Relation::MuchLess, margin));
            }
        }
        rep.missing.insert(rep.missing.end(), r.missing().begin(), r.missing().end());
    }
    {
        detail::ParamReader r(p, "magnetic");
        const Quantity m = r.mass(), R = r.get(p.R, "R", units::m), t = r.get(p.t, "t", units::s),
                       w = r.angular(p.omega, "omega"), chi = r.get(p.chi, "chi", units::one),
                       B = r.get(p.B, "B", units::T);
        if (r.ok()) {
            const Quantity V = 4.0 / 3.0 * std::numbers::pi * pow(R, 3);
            // Delta alpha = sqrt(omega/(2 m hbar)) chi V B (dB/dx) t^2 / mu0 = coef * dB/dx.
            const Quantity coef = sqrt(w / (2.0 * m * si::hbar)) * chi * V * B * t * t / si::mu0;
            rep.values.push_back({"magnetic: dB/dx threshold", 1.0 / coef, "Delta alpha = 1"});
            if (p.dBdx)
                rep.checks.push_back(make_check("magnetic: Delta alpha << 1", coef * Quantity(*p.dBdx, units::T_per_m),
                                                unity, Relation::MuchLess, margin));
        }
        rep.missing.insert(rep.missing.end(), r.missing().begin(), r.missing().end());
    }
    {
        detail::ParamReader r(p, "electric");
        const Quantity m = r.mass(), R = r.get(p.R, "R", units::m), t = r.get(p.t, "t", units::s),
                       w = r.angular(p.omega, "omega"), eps = r.get(p.epsilon, "epsilon", units::one),
                       E = r.get(p.E, "E", units::V_per_m);
        if (r.ok()) {
            const Quantity V = 4.0 / 3.0 * std::numbers::pi * pow(R, 3);
            const Quantity coef = sqrt(w / (2.0 * m * si::hbar)) * eps * si::eps0 * V * E * t * t;
            rep.values.push_back({"electric: dE/dx threshold", 1.0 / coef, "Delta alpha = 1"});
            if (p.dEdx)
                rep.checks.push_back(make_check("electric: Delta alpha << 1", coef * Quantity(*p.dEdx, units::V_per_m2),
                                                unity, Relation::MuchLess, margin));
        }
        rep.missing.insert(rep.missing.end(), r.missing().begin(), r.missing().end());
    }
    return rep;
}

inline CheckReport pendulum_feasibility(const ExperimentParams& p, double margin = 0.1) {
    detail::ParamReader r(p, "pendulum");
    const Quantity rho = r.get(p.rho, "rho", units::kg_per_m3), wI = r.angular(p.omega_I, "omega_I"),
                   m = r.get(p.m, "m", units::kg), R = r.get(p.R, "R", units::m), a = r.get(p.a, "a", units::m),
                   t = r.get(p.t, "t", units::s), Q = r.get(p.Q, "Q", units::one),
                   T_th = r.get(p.T_th, "T_th", units::K), P_circ = r.get(p.P_circ, "P_circ", units::W),
                   wL = r.get(p.omega_L, "omega_L", units::per_s), L = r.get(p.L_cav, "L_cav", units::m),
                   kappa = r.get(p.kappa, "kappa", units::per_s);
    if (!r.ok()) detail::throw_missing(r.missing());

    const Quantity unity{1.0};
    const Quantity d = p.d ? Quantity(*p.d, units::m) : 2.0 * R;
    const Quantity I = 2.0 * m * a * a;
    const Quantity gamma = 8.0 * std::numbers::pi / 3.0 * si::G * rho / wI;
    const Quantity dw = wI / Q;

    CheckReport rep;
    rep.values.push_back({"gamma", gamma, "8 pi G rho/(3 omega_I)"});
    rep.values.push_back({"Gm/d^3", si::G * m / pow(d, 3), ""});
    rep.values.push_back({"moment of inertia", I, "2 m a^2"});
    if (p.tau) rep.values.push_back({"sqrt(tau/I)", sqrt(Quantity(*p.tau, dim(1, 2, -2)) / I), "compare omega_I"});
    rep.values.push_back({"heating: T_th/Q threshold", si::hbar / (si::k_B * t), "k_B T t/(hbar Q) = 1"});
    const Quantity ds_min =
        cbrt(std::numbers::pi / 160.0 * si::hbar * si::c / (si::G * rho * rho * pow(R, 3)));
    rep.values.push_back({"Casimir: minimum standoff", ds_min, ""});
    // hbar a^2 Q omega_L P/(I L omega_I c kappa) > k_B T  <=>  (I omega_I/(a^2 Q)) T < C.
    const Quantity C = si::hbar * wL * P_circ / (L * si::c * kappa * si::k_B);
    rep.values.push_back({"cooling: (I omega_I/(a^2 Q)) T_th threshold", C, "kg s^-1 K"});
    rep.values.push_back({"cooling: T_th/Q threshold", C * a * a / (I * wI), ""});
    rep.values.push_back({"T_th/Q", T_th / Q, ""});

    rep.checks.push_back(make_check("resonance: delta_omega omega << Gm/d^3", dw * wI, si::G * m / pow(d, 3),
                                    Relation::MuchLess, margin));
    rep.checks.push_back(make_check("heating: k_B T_th t/(hbar Q) < 1", si::k_B * T_th * t / (si::hbar * Q), unity,
                                    Relation::Less, margin));
    rep.checks.push_back(make_check("regime: gamma << omega_I", gamma, wI, Relation::MuchLess, margin));
    rep.checks.push_back(make_check("regime: delta_omega << gamma", dw, gamma, Relation::MuchLess, margin));
    if (p.d_s)
        rep.checks.push_back(make_check("Casimir: standoff", ds_min, Quantity(*p.d_s, units::m), Relation::Less, margin));
    rep.checks.push_back(make_check("cooling: k_B T_th < hbar a^2 Q omega_L P/(I L omega_I c kappa)", si::k_B * T_th,
                                    si::hbar * a * a * Q * wL * P_circ / (I * L * wI * si::c * kappa),
                                    Relation::Less, margin));
    return rep;
}

}  // namespace gravlocc
