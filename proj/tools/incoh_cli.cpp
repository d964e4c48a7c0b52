#include <cstdio>
#include <exception>
#include <stdexcept>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "incoh/calc.hpp"
#include "incoh/config.hpp"
#include "incoh/registry.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfig = 2;
constexpr int kGate = 3;

std::string kind_name(incoh::ParamKind k) {
    switch (k) {
        case incoh::ParamKind::length: return "length";
        case incoh::ParamKind::number: return "number";
        case incoh::ParamKind::integer: return "integer";
    }
    return "?";
}

void print_registry() {
    for (const auto& s : incoh::registry()) {
        std::cout << s.name << "  " << s.summary << '\n';
        std::cout << "  grid n=" << s.grid.n << " dx=" << incoh::format_number(s.grid.dx) << "m frames=" << s.frames
                  << '\n';
        std::string required, optional;
        for (const auto& p : s.params) {
            const std::string item = p.name + ":" + kind_name(p.kind);
            if (p.required) {
                required += " " + item;
            } else {
                optional += " " + item + "=" + incoh::format_number(p.default_value);
            }
        }
        std::cout << "  required:" << (required.empty() ? " (none)" : required) << '\n';
        if (!optional.empty()) std::cout << "  optional:" << optional << '\n';
        std::cout << "  products:";
        for (const auto& p : s.products) std::cout << ' ' << p;
        std::cout << '\n';
    }
    std::cout << "calc kinds:";
    for (const auto& k : incoh::calc_kinds()) std::cout << ' ' << k;
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incoherent-light correlation optics simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario file");
    std::string file, out_dir = "out";
    std::uint64_t frames = 0, seed = 0;
    bool oracle_only = false, strict = false;
    unsigned workers = 0;
    run->add_option("file", file, "scenario file")->required();
    auto* frames_opt = run->add_option("--frames", frames, "Monte Carlo frames");
    auto* seed_opt = run->add_option("--seed", seed, "random seed");
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--oracle-only", oracle_only, "analytic prediction only");
    run->add_flag("--strict-sampling", strict, "treat undersampled propagation as an error");
    run->add_option("--workers", workers, "worker threads, 0 for all cores");

    auto* calc = app.add_subcommand("calc", "evaluate a closed-form quantity");
    std::string kind;
    std::vector<std::string> kv;
    calc->add_option("kind", kind, "quantity kind")->required();
    calc->add_option("params", kv, "key=value pairs with units");

    app.add_subcommand("list", "print the scenario registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (app.got_subcommand("list")) {
            print_registry();
            return kOk;
        }
        if (app.got_subcommand("calc")) {
            const auto r = incoh::calc(kind, incoh::parse_calc_args(kv));
            std::cout << incoh::format_calc_csv(r);
            return kOk;
        }
        incoh::ScenarioConfig cfg = incoh::load_scenario_file(file);
        if (*frames_opt) cfg.frames = frames;
        if (*seed_opt) cfg.seed = seed;
        incoh::RunOptions opt;
        opt.oracle_only = oracle_only;
        opt.strict_sampling = strict;
        opt.workers = workers;
        const auto out = incoh::run_scenario(cfg, opt);
        incoh::write_outputs(out, out_dir, cfg.hash_hex(), cfg.seed, cfg.outputs);
        for (const auto& r : out.report) {
            if (r.status == incoh::Status::fail)
                std::cerr << "FAIL " << r.key << " = " << incoh::format_number(r.value) << "  " << r.detail << '\n';
        }
        std::cout << "wrote " << out_dir << " (config " << cfg.hash_hex() << ", seed " << cfg.seed << ")\n";
        if (out.gate_violation) {
            std::cerr << "gate violation; interference products are flagged in report.csv\n";
            return kGate;
        }
        return kOk;
    } catch (const incoh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
