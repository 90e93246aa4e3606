#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foswe/stepper.hpp"

namespace foswe {

/// One CSV row of per-step monitors.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double irrot_max = 0.0;
    double subcrit_min = 0.0;
    double transv_min = 0.0;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    double char_energy = 0.0;
    double trace_int = 0.0;
    double E1 = 0.0;
    double E2 = 0.0;
    double rellich_res = 0.0;
    double flux_gap = 0.0;

    static const char* csv_header();
    std::string csv_row() const;
};

/// Computes the paper-side conserved quantities and stability monitors from a
/// stage cache; owns the running accumulators (boundary-trace integral,
/// previous tendencies for the second time derivatives of the energy
/// monitors, previous interior solve for the pressure).
class DiagnosticsEngine {
public:
    explicit DiagnosticsEngine(const Stepper& stepper);

    /// Full record for the state cached in `eval`; `dt` is the step just taken
    /// (0 on the initial record).
    DiagnosticsRecord compute(const SystemState& state, const StageEval& eval, double dt);

    /// Individual quantities (also used by tests).
    double total_energy(const StageEval& eval) const;
    double total_mass(const StageEval& eval) const;
    /// Returns {enstrophy, exterior irrotationality max, interior curl max}.
    std::array<double, 3> enstrophy_and_vorticity(const StageEval& eval) const;
    /// Characteristic-field energy and the fields themselves.
    double characteristic_energy(const StageEval& eval, Field* alpha = nullptr,
                                 Field* beta = nullptr) const;
    /// Pointwise Rellich identity mismatch with f = chi_b n^phi, q = h_i v_i
    /// on the interior chart (grid derivatives; truncation-level on smooth
    /// data).
    double rellich_residual(const StageEval& eval) const;
    /// Order-m energy monitor (m = 1 or 2).
    double em_monitor(const StageEval& eval, int m, double dt) const;
    /// Boundary energy-flux mismatch max over the ring.
    double flux_gap(const StageEval& eval, double dt) const;

    const std::optional<InteriorState>& previous_interior() const { return prev_interior_; }
    void seed_pressure_history(const InteriorState& st, double t) {
        prev_interior_ = st;
        prev_interior_->t = t;
    }

private:
    const Stepper* stepper_;
    Field chib_ext_;  // chi_b on the exterior grid
    Field chib_int_;  // chi_b on the interior grid
    double trace_accum_ = 0.0;
    std::optional<InteriorState> prev_interior_;
    std::optional<ExteriorTendencies> prev_tend_;
    std::optional<VecField> prev_dphi_dt_;
    std::optional<VecField> prev_vi_;
    double prev_t_ = 0.0;
};

/// Pointwise Rellich identity mismatch with f = chi_b n^phi, q = h_i v_i on
/// the interior chart using grid derivatives (spectral arc, FD radius); the
/// identity is exact, so the residual sits at truncation level.
double rellich_grid_residual(const DiffeoField& d, const Field& chib, const InteriorState& in);

/// CSV writer with full-precision scientific formatting.
class DiagnosticsWriter {
public:
    explicit DiagnosticsWriter(const std::string& path);
    ~DiagnosticsWriter();
    void write(const DiagnosticsRecord& rec);
    void flush();

private:
    std::FILE* f_;
};

} // namespace foswe
