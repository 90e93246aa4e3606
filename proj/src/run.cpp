#include "foswe/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

namespace foswe {

namespace {

namespace fs = std::filesystem;

RunResult drive(const RunConfig& cfg, const std::string& output_override, const Checkpoint* from) {
    RunResult result;
    std::string outdir = output_override.empty() ? cfg.output_dir : output_override;
    if (const char* env = std::getenv("FOSWE_OUTPUT_DIR"); env && output_override.empty())
        outdir = env;
    fs::create_directories(outdir);
    result.output_dir = outdir;

    auto t_start = std::chrono::steady_clock::now();
    std::string fail_reason;
    long steps = 0;
    double t_final = 0.0;
    std::optional<SystemState> last_state;

    try {
        auto violations = validate_config(cfg);
        if (!violations.empty()) {
            std::string msg = "config invalid:";
            for (const auto& v : violations) msg += "\n  - " + v.what +
                                                    (v.where.empty() ? "" : " @ " + v.where);
            throw SimError(ErrorCode::ConfigInvalid, msg);
        }
        RunSetup setup = build_setup(cfg);
        SystemState state = from ? from->state : setup.state;
        Stepper stepper(setup.disc);
        struct StateMirror {
            std::optional<SystemState>& slot;
            const SystemState& src;
            ~StateMirror() { slot = src; }
        } mirror{last_state, state};
        DiagnosticsEngine diag(stepper);
        DiagnosticsWriter writer(outdir + "/diagnostics.csv");

        StageEval cache = stepper.prime(state);
        if (from && from->has_phi_prev) {
            InteriorState seed = *cache.interior;
            seed.phi = from->phi_prev;
            seed.phi_pole = from->phi_prev_pole;
            diag.seed_pressure_history(seed, from->phi_prev_t);
        }
        writer.write(diag.compute(state, cache, 0.0));

        while (state.t < cfg.T_end - 1e-14) {
            double dt = stepper.cfl_dt(cache);
            if (dt <= 0.0 || !std::isfinite(dt))
                throw SimError(ErrorCode::DepthNonpositive, "CFL produced nonpositive dt");
            if (state.t + dt > cfg.T_end) dt = cfg.T_end - state.t;
            state = stepper.advance(state, dt, cache);
            ++steps;
            if (cfg.diag_cadence > 0 && state.step % cfg.diag_cadence == 0)
                writer.write(diag.compute(state, cache, dt));
            if (cfg.snapshots && cfg.snapshot_cadence > 0 &&
                state.step % cfg.snapshot_cadence == 0) {
                Checkpoint chk;
                chk.state = state;
                if (diag.previous_interior()) {
                    chk.phi_prev = diag.previous_interior()->phi;
                    chk.phi_prev_pole = diag.previous_interior()->phi_pole;
                    chk.phi_prev_t = diag.previous_interior()->t;
                    chk.has_phi_prev = true;
                }
                save_checkpoint(outdir + "/snapshot_" + std::to_string(state.step) + ".chk", chk);
            }
        }
        t_final = state.t;
        writer.flush();

        Checkpoint final_chk;
        final_chk.state = state;
        if (diag.previous_interior()) {
            final_chk.phi_prev = diag.previous_interior()->phi;
            final_chk.phi_prev_pole = diag.previous_interior()->phi_pole;
            final_chk.phi_prev_t = diag.previous_interior()->t;
            final_chk.has_phi_prev = true;
        }
        save_checkpoint(outdir + "/final.chk", final_chk);
        result.exit_code = 0;
        result.message = "completed";
    } catch (const SimError& e) {
        result.exit_code = e.exit_code();
        result.message = e.what();
        fail_reason = e.what();
        if (last_state) {
            // post-mortem dump of the last completed state
            Checkpoint dump;
            dump.state = *last_state;
            try {
                save_checkpoint(outdir + "/failure.chk", dump);
            } catch (...) {
            }
        }
    }
    result.steps = steps;
    result.t_final = t_final;

    auto t_end = std::chrono::steady_clock::now();
    double wall = std::chrono::duration<double>(t_end - t_start).count();

    nlohmann::json manifest;
    manifest["config_hash"] = cfg.hash();
    manifest["format_version"] = "FOSWE1";
    manifest["wall_time_s"] = wall;
    manifest["steps"] = steps;
    manifest["t_final"] = t_final;
    manifest["exit_code"] = result.exit_code;
    manifest["status"] = result.exit_code == 0 ? "ok" : fail_reason;
    std::ofstream mf(outdir + "/manifest.json");
    mf << manifest.dump(2) << "\n";
    std::ofstream cf(outdir + "/config.cfg");
    cf << cfg.serialize();
    return result;
}

} // namespace

RunResult run_simulation(const RunConfig& cfg, const std::string& output_override) {
    return drive(cfg, output_override, nullptr);
}

RunResult resume_simulation(const RunConfig& cfg, const std::string& checkpoint_path,
                            const std::string& output_override) {
    Checkpoint chk = load_checkpoint(checkpoint_path);
    return drive(cfg, output_override, &chk);
}

} // namespace foswe
