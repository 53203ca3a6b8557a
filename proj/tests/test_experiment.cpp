#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "gravlocc/experiment.hpp"
#include "gravlocc/units.hpp"

using namespace gravlocc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi = std::numbers::pi;
const double G = 6.6743e-11, hbar = 1.054571817e-34, kB = 1.380649e-23, c0 = 2.99792458e8;

// Gold spheres on a line with coherent amplitude sqrt(10).
ExperimentParams reference_set() {
    ExperimentParams p;
    p.n = 100;
    p.R = 12.5e-6;
    p.d = 125e-6;
    p.rho = 1.93e4;
    p.epsilon = 6.9;
    p.omega = 1e-3;
    p.delta_omega = 1e-7;
    p.t = 185;
    p.lambda = 1e-5;
    p.mu = 1.0;
    p.delta_t = 1.0;
    p.P2 = 0.1;
    p.P = 1e-17;
    p.T_env = 1.0;
    p.alpha_amp = std::sqrt(10.0);
    p.chi = 6.9;
    p.B = 1e-9;
    p.E = 1e3;
    return p;
}

ExperimentParams pendulum_set() {
    ExperimentParams p;
    p.m = 1e-4;
    p.R = 2e-3;
    p.a = 0.1;
    p.rho = 1.93e4;
    p.omega_I = 7e-3;
    p.tau = 1e-10;
    p.t = 1e2;
    p.Q = 1e13;
    p.T_th = 1e-2;
    p.P_circ = 10;
    p.omega_L = 2 * pi * 2.8e14;
    p.L_cav = 9e-2;
    p.kappa = 2 * pi * 0.5e6;
    return p;
}

double sphere_mass_oracle(double R, double rho) { return 4.0 / 3.0 * pi * R * R * R * rho; }

int rank(Verdict v) { return v == Verdict::Pass ? 0 : v == Verdict::Marginal ? 1 : 2; }

std::map<std::string, int> verdicts(const ExperimentParams& p) {
    auto rep = check_assumptions(p);
    rep.append(noise_budget(p));
    std::map<std::string, int> out;
    for (const auto& c : rep.checks) out[c.name] = rank(c.verdict);
    return out;
}

}  // namespace

TEST_CASE("units") {
    const Quantity a(2.0, units::m), b(3.0, units::s);
    CHECK((a / b).unit() == "m s^-1");
    CHECK(sqrt(Quantity(4.0, units::Pa)).unit() == "kg^1/2 m^-1/2 s^-1");
    CHECK(pow(Quantity(8.0, units::m), 1, 3).value() == Catch::Approx(2.0));
    CHECK(cbrt(Quantity(8.0, dim(0, 3, 0))).dim() == units::m);
    CHECK_THROWS_AS(a + b, Error);
    CHECK_THROWS_AS(a.in(units::s), Error);
    CHECK(Quantity(1.0).unit() == "1");
    CHECK(si::eps0.dim() == dim(-1, -3, 4, 0, 2));
    CHECK_THAT(si::eps0.value(), WithinRel(8.8541878128e-12, 1e-9));
}

TEST_CASE("make_check semantics") {
    const auto pass = make_check("x", Quantity(0.05), Quantity(1.0), Relation::MuchLess, 0.1);
    CHECK(pass.verdict == Verdict::Pass);
    CHECK(make_check("x", Quantity(0.5), Quantity(1.0), Relation::MuchLess, 0.1).verdict == Verdict::Marginal);
    CHECK(make_check("x", Quantity(2.0), Quantity(1.0), Relation::MuchLess, 0.1).verdict == Verdict::Fail);
    CHECK(make_check("x", Quantity(0.99), Quantity(1.0), Relation::Less, 0.1).verdict == Verdict::Pass);
    CHECK(make_check("x", Quantity(1.01), Quantity(1.0), Relation::Less, 0.1).verdict == Verdict::Fail);
    CHECK(make_check("x", Quantity(0.0), Quantity(0.0), Relation::Less, 0.1).ratio == 0.0);
    CHECK_THROWS_AS(make_check("x", Quantity(1.0, units::m), Quantity(1.0), Relation::Less, 0.1), Error);
}

TEST_CASE("assumption checks on the reference set") {
    const auto p = reference_set();
    const auto rep = check_assumptions(p);
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() == 11);
    const double m = sphere_mass_oracle(12.5e-6, 1.93e4);
    CHECK_THAT(rep.find_value("m")->value.value(), WithinRel(m, 1e-14));
    CHECK_THAT(rep.find_value("sqrt(Gm/d^3)")->value.value(), WithinRel(std::sqrt(G * m / std::pow(125e-6, 3)), 1e-12));
    CHECK_THAT(rep.find_value("sqrt(Gm/d^3)")->value.value(), WithinRel(7.34e-5, 0.01));
    const auto win = lambda_window(p);
    CHECK_THAT(win.lower.value(), WithinRel(100 * hbar / (m * 125e-6 * 125e-6 * 1e-3), 1e-12));
    CHECK_THAT(win.upper.value(), WithinRel(G * m * 185 / (std::pow(125e-6, 3) * 1e-3), 1e-12));
    for (const auto& c : rep.checks) CHECK(c.lhs.dim() == c.rhs.dim());

    SECTION("touching spheres fail the Casimir check") {
        auto q = p;
        q.d = 2 * *q.R;
        CHECK(check_assumptions(q).find_check("II: Casimir term << (d-2R)^6")->verdict == Verdict::Fail);
    }
    SECTION("missing parameters are listed") {
        ExperimentParams q;
        q.n = 10;
        try {
            check_assumptions(q);
            FAIL("expected MissingParameter");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MissingParameter);
            CHECK(std::string(e.what()).find("omega") != std::string::npos);
        }
    }
    SECTION("Hz flag converts to angular frequency") {
        auto q = p;
        q.omega = 1e-3 / (2 * pi);
        q.delta_omega = 1e-7 / (2 * pi);
        q.omega_is_hz = true;
        CHECK_THAT(coupling_gamma(q).value(), WithinRel(coupling_gamma(p).value(), 1e-12));
    }
}

TEST_CASE("runtime estimate") {
    auto p = reference_set();
    const double m = sphere_mass_oracle(12.5e-6, 1.93e4);
    CHECK_THAT(runtime_estimate(p, 0.9).value(), WithinRel(0.1 * std::pow(125e-6, 3) * 1e-3 / (100 * G * m), 1e-12));
    CHECK_THAT(runtime_estimate(p, 0.9).value(), WithinRel(185.0, 0.02));
    CHECK(runtime_estimate(p, 1.0).value() == 0.0);
    const double t1 = runtime_estimate(p, 0.9).value();
    p.n = 200;
    CHECK_THAT(runtime_estimate(p, 0.9).value(), WithinRel(t1 / 2, 1e-14));
}

TEST_CASE("noise budget") {
    const auto p = reference_set();
    const auto rep = noise_budget(p);
    CHECK(rep.missing.empty());
    const double m = sphere_mass_oracle(12.5e-6, 1.93e4), R = 12.5e-6, t = 185, w = 1e-3;
    SECTION("mass fluctuation distance") {
        const double k = G * 1.0 * std::sqrt(m * t * 1.0 / (3 * hbar * w));
        const double v = std::sqrt(-2 * std::log(0.9) / 100);
        CHECK_THAT(rep.find_value("mass fluctuation: minimum distance")->value.value(), WithinRel(std::sqrt(k / v), 1e-12));
    }
    SECTION("gas constant") {
        const double C = hbar * m * w / (pi * R * R * t * std::sqrt(3.347e-27 * kB));
        CHECK_THAT(rep.find_value("gas collisions: P sqrt(T) threshold")->value.value(), WithinRel(C, 1e-12));
        auto q = p;
        q.P = 0.0;
        const auto c = noise_budget(q).find_check("gas collisions: |Delta alpha|^2 << 1");
        CHECK(c->ratio == 0.0);
        CHECK(c->verdict == Verdict::Pass);
    }
    SECTION("black-body temperature") {
        const double coef = 4 * pi * pi * 5.670374419e-8 * R * R * 11.0 * t / (2.898e-3 * m * c0 * w);
        CHECK_THAT(rep.find_value("black body: temperature threshold")->value.value(), WithinRel(std::pow(coef, -0.2), 1e-12));
    }
    SECTION("field gradients") {
        const double V = 4.0 / 3.0 * pi * R * R * R, mu0 = 4e-7 * pi, eps0 = 1.0 / (mu0 * c0 * c0);
        const double root = std::sqrt(w / (2 * m * hbar));
        CHECK_THAT(rep.find_value("magnetic: dB/dx threshold")->value.value(),
                   WithinRel(mu0 / (root * 6.9 * V * 1e-9 * t * t), 1e-12));
        CHECK_THAT(rep.find_value("electric: dE/dx threshold")->value.value(),
                   WithinRel(1.0 / (root * 6.9 * eps0 * V * 1e3 * t * t), 1e-12));
    }
    SECTION("missing noise inputs are reported, not thrown") {
        ExperimentParams q = reference_set();
        q.mu.reset();
        q.E.reset();
        const auto r2 = noise_budget(q);
        const std::set<std::string> miss(r2.missing.begin(), r2.missing.end());
        CHECK(miss.count("mass fluctuation: mu") == 1);
        CHECK(miss.count("electric: E") == 1);
    }
    for (const auto& c : rep.checks) CHECK(c.lhs.dim() == c.rhs.dim());
}

TEST_CASE("margins are monotone in adverse parameters") {
    const auto base = reference_set();
    for (const double factor : {10.0, 1e3, 1e6, 1e12, 1e18}) {
        auto hotter = base, denser = base;
        hotter.T_env = *base.T_env * factor;
        denser.P = *base.P * factor;
        const auto v0 = verdicts(base), vT = verdicts(hotter), vP = verdicts(denser);
        for (const auto& [name, r] : v0) {
            CHECK(vT.at(name) >= r);
            CHECK(vP.at(name) >= r);
        }
    }
    // Smaller d is adverse for size, Casimir and the duration-type checks.
    const std::set<std::string> d_adverse = {"I: oscillation amplitude << d", "II: R << d",
                                             "II: Casimir term << (d-2R)^6", "IV: n gamma t << 1",
                                             "IV': n hbar/(m d^2 omega) << lambda", "IV': gamma t << 1/n"};
    for (const double shrink : {0.9, 0.5, 0.3, 0.2}) {
        auto closer = base;
        closer.d = *base.d * shrink;
        const auto v0 = verdicts(base), vd = verdicts(closer);
        for (const auto& name : d_adverse) CHECK(vd.at(name) >= v0.at(name));
    }
}

TEST_CASE("pendulum feasibility") {
    const auto p = pendulum_set();
    const auto rep = pendulum_feasibility(p);
    const double I = 2 * 1e-4 * 0.01;
    CHECK_THAT(rep.find_value("gamma")->value.value(), WithinRel(8 * pi * G * 1.93e4 / (3 * 7e-3), 1e-12));
    CHECK_THAT(rep.find_value("moment of inertia")->value.value(), WithinRel(I, 1e-14));
    CHECK_THAT(rep.find_value("heating: T_th/Q threshold")->value.value(), WithinRel(hbar / (kB * 1e2), 1e-12));
    const double C = hbar * 2 * pi * 2.8e14 * 10 / (9e-2 * c0 * 2 * pi * 0.5e6 * kB);
    CHECK_THAT(rep.find_value("cooling: (I omega_I/(a^2 Q)) T_th threshold")->value.value(), WithinRel(C, 1e-12));
    CHECK_THAT(rep.find_value("cooling: T_th/Q threshold")->value.value(), WithinRel(C * 0.01 / (I * 7e-3), 1e-12));
    CHECK(rep.find_check("heating: k_B T_th t/(hbar Q) < 1")->verdict == Verdict::Pass);
    for (const auto& c : rep.checks) CHECK(c.lhs.dim() == c.rhs.dim());
    SECTION("vanishing density switches off the interaction") {
        auto q = p;
        q.rho = 1e-30;
        const auto r = pendulum_feasibility(q);
        CHECK(r.find_value("gamma")->value.value() < 1e-35);
        CHECK(r.find_check("regime: delta_omega << gamma")->verdict == Verdict::Fail);
    }
    SECTION("missing inputs throw") {
        auto q = p;
        q.kappa.reset();
        CHECK_THROWS_AS(pendulum_feasibility(q), Error);
    }
}
