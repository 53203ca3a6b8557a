// gravlocc: batch driver for bounds, sensitivities, feasibility checks and benchmarks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gravlocc/cli/commands.hpp"

namespace {

using namespace gravlocc::cli;

struct Common {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<double> margin;
    std::string subset_policy;
    std::string format;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
    auto* opt = sub->add_option("-c,--config", c.config, "JSON run configuration (comments allowed)");
    if (config_required) opt->required();
    opt->check(CLI::ExistingFile);
    sub->add_option("-o,--output", c.output, "write results here instead of stdout");
    sub->add_option("--seed", c.seed, "seed for the random subset policy");
    sub->add_option("--margin", c.margin, "margin for '<<' checks, in (0, 1]");
    sub->add_option("--subset-policy", c.subset_policy, "auto | exhaustive | alternating | random:k");
    sub->add_option("--format", c.format, "csv | table")->check(CLI::IsMember({"csv", "table"}));
}

int run(const std::string& name, const Common& c) {
    RunConfig cfg;
    std::string base_dir;
    try {
        if (!c.config.empty()) {
            cfg = load_config(c.config);
            base_dir = std::filesystem::path(c.config).parent_path().string();
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    if (c.seed) cfg.seed = *c.seed;
    std::cerr << "seed=" << cfg.seed << "\n";
    if (c.margin) {
        if (!(*c.margin > 0.0 && *c.margin <= 1.0)) {
            std::cerr << "config error: --margin must lie in (0, 1]\n";
            return kConfigError;
        }
        cfg.margin = *c.margin;
    }
    if (!c.subset_policy.empty()) cfg.subset_policy = c.subset_policy;
    if (!c.format.empty()) cfg.output.format = c.format;
    if (!c.output.empty()) cfg.output.path = c.output;

    Table table;
    int code = kOk;
    if (name == "bound") code = cmd_bound(cfg, base_dir, table, std::cerr);
    else if (name == "sensitivity") code = cmd_sensitivity(cfg, base_dir, table, std::cerr);
    else if (name == "check") code = cmd_check(cfg, table, std::cerr);
    else code = cmd_benchmarks(cfg, table, std::cerr);
    if (code == kConfigError || code == kNumericalFailure) return code;

    if (cfg.output.path.empty()) {
        table.write(std::cout, cfg.output.format);
    } else {
        std::ofstream out(cfg.output.path);
        if (!out) {
            std::cerr << "config error: cannot write '" << cfg.output.path << "'\n";
            return kConfigError;
        }
        table.write(out, cfg.output.format);
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian LOCC bounds for gravitationally coupled oscillators"};
    app.require_subcommand(1);
    Common common;
    auto* bound = app.add_subcommand("bound", "passive-dynamics bound on a time grid");
    auto* sens = app.add_subcommand("sensitivity", "short-time sensitivity eta and norm diagnostics");
    auto* check = app.add_subcommand("check", "assumption, noise and pendulum feasibility checks");
    auto* bench = app.add_subcommand("benchmarks", "finite-dimensional and teleportation benchmarks");
    add_common(bound, common, true);
    add_common(sens, common, true);
    add_common(check, common, true);
    add_common(bench, common, false);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }
    for (auto* sub : {bound, sens, check, bench})
        if (sub->parsed()) return run(sub->get_name(), common);
    return kConfigError;
}
