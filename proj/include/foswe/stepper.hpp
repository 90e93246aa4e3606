#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foswe/coupling.hpp"
#include "foswe/exterior.hpp"
#include "foswe/interior.hpp"

namespace foswe {

/// Everything the coupled step advances: exterior fields, the contact-line
/// graph and its cached rate, and the boundary potential trace.
struct SystemState {
    ContactLine line;
    std::vector<double> psi;
    ExteriorState ext;
    double t = 0.0;
    long step = 0;
};

/// Immutable per-run discretization bundle.
struct Discretization {
    ReferenceCurve curve;
    std::shared_ptr<NTGrid> grid_ext;
    std::shared_ptr<NTGrid> grid_int;
    HanzawaParams hanzawa;
    PhysicsParams physics;
    ExteriorParams exterior;
    ObstacleSpec obstacle;
};

/// Cache of one stage evaluation: diffeomorphisms, interior solve, boundary
/// trace, corrected state and tendencies.  Reused by diagnostics so each step
/// costs exactly two interior solves.
struct StageEval {
    std::shared_ptr<DiffeoField> d_ext;
    std::shared_ptr<DiffeoField> d_int;
    std::shared_ptr<EllipticOperator> op;
    std::shared_ptr<InteriorState> interior;
    CouplingTrace trace;
    SystemState corrected; // exterior boundary rows replaced by the BC
    std::vector<double> dgamma;
    std::vector<double> dpsi;
    ExteriorTendencies tend;
    double subcrit_min = 0.0;
    double transv_min = 0.0;
};

class Stepper {
public:
    explicit Stepper(Discretization disc);

    const Discretization& disc() const { return disc_; }

    /// Evaluate one stage at the given state (builds diffeos, solves the
    /// interior problem, applies the characteristic boundary, forms all
    /// tendencies).  Fatal bound violations throw.
    StageEval eval_stage(const SystemState& s, const StageEval* prev) const;

    /// CFL bound from a cached stage.
    double cfl_dt(const StageEval& e) const;

    /// One SSP-RK2 step; returns the advanced state and leaves a fresh stage
    /// cache for it in `cache` (used by diagnostics and the next step).
    SystemState advance(const SystemState& s, double dt, StageEval& cache) const;

    /// Initial cache for a freshly built state.
    StageEval prime(const SystemState& s) const { return eval_stage(s, nullptr); }

private:
    SystemState axpy(const SystemState& base, const StageEval& eval, double dt) const;
    void filter(SystemState& s) const;

    Discretization disc_;
};

// ---------------------------------------------------------------------------
// Checkpointing: magic "FOSWE1" + dims/time/step header + row-major float64
// blocks (gamma, dgamma_dt, psi_i, zeta, v1, v2, phi_i_prev).
// ---------------------------------------------------------------------------

struct Checkpoint {
    SystemState state;
    Field phi_prev;       // previous interior potential (pressure history)
    double phi_prev_pole = 0.0;
    double phi_prev_t = 0.0;
    bool has_phi_prev = false;
};

void save_checkpoint(const std::string& path, const Checkpoint& chk);
Checkpoint load_checkpoint(const std::string& path);

} // namespace foswe
