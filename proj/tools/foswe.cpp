#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "foswe/identity_lab.hpp"
#include "foswe/run.hpp"

namespace {

int cmd_identities(std::uint64_t seed, int count) {
    using namespace foswe;
    const double threshold = 1e-10;
    bool all_ok = true;
    std::printf("%-12s %-14s %-10s %s\n", "identity", "max residual", "threshold", "status");
    std::map<std::string, double> worst;
    for (int i = 0; i < count; ++i) {
        RandomFieldSpec spec;
        spec.seed = seed + static_cast<std::uint64_t>(i);
        for (const auto& [k, v] : check_vector_identities(spec))
            worst[k] = std::max(worst[k], v);
        for (const auto& [k, v] : check_linearization_rules(spec))
            worst[k] = std::max(worst[k], v);
        worst["rellich"] = std::max(worst["rellich"], check_rellich_identity(spec));
    }
    for (const auto& [k, v] : worst) {
        bool ok = v <= threshold;
        all_ok = all_ok && ok;
        std::printf("%-12s %-14.3e %-10.0e %s\n", k.c_str(), v, threshold, ok ? "pass" : "FAIL");
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shallow water / partially immersed obstacle simulator"};
    app.require_subcommand(1);

    std::string config_path, checkpoint_path, outdir;
    std::uint64_t seed = 1;
    int seed_count = 20;

    auto* run = app.add_subcommand("run", "run a simulation from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("-o,--output", outdir, "output directory override");

    auto* validate = app.add_subcommand("validate", "check a config against the run invariants");
    validate->add_option("config", config_path, "config file")->required();

    auto* identities = app.add_subcommand("identities", "run the algebraic identity suite");
    identities->add_option("--seed", seed, "base seed");
    identities->add_option("--count", seed_count, "number of seeded field sets");

    auto* resume = app.add_subcommand("resume", "continue from a checkpoint");
    resume->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();
    resume->add_option("-c,--config", config_path, "config file (defaults to sibling config.cfg)");
    resume->add_option("-o,--output", outdir, "output directory override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            auto cfg = foswe::RunConfig::parse_file(config_path);
            auto res = foswe::run_simulation(cfg, outdir);
            std::fprintf(res.exit_code == 0 ? stdout : stderr, "%s (steps=%ld, t=%g) -> %s\n",
                         res.message.c_str(), res.steps, res.t_final, res.output_dir.c_str());
            return res.exit_code;
        }
        if (app.got_subcommand(validate)) {
            auto cfg = foswe::RunConfig::parse_file(config_path);
            auto violations = foswe::validate_config(cfg);
            if (violations.empty()) {
                std::printf("ok\n");
                return 0;
            }
            for (const auto& v : violations)
                std::fprintf(stderr, "violation: %s%s\n", v.what.c_str(),
                             v.where.empty() ? "" : (" @ " + v.where).c_str());
            return 2;
        }
        if (app.got_subcommand(identities)) return cmd_identities(seed, seed_count);
        if (app.got_subcommand(resume)) {
            if (config_path.empty()) {
                auto slash = checkpoint_path.find_last_of('/');
                std::string dir =
                    slash == std::string::npos ? "." : checkpoint_path.substr(0, slash);
                config_path = dir + "/config.cfg";
            }
            auto cfg = foswe::RunConfig::parse_file(config_path);
            auto res = foswe::resume_simulation(cfg, checkpoint_path, outdir);
            std::fprintf(res.exit_code == 0 ? stdout : stderr, "%s (steps=%ld, t=%g) -> %s\n",
                         res.message.c_str(), res.steps, res.t_final, res.output_dir.c_str());
            return res.exit_code;
        }
    } catch (const foswe::SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
