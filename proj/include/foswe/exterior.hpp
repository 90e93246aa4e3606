#pragma once

#include <array>
#include <vector>

#include "foswe/core.hpp"
#include "foswe/geometry.hpp"
#include "foswe/hanzawa.hpp"

namespace foswe {

struct PhysicsParams {
    double g = 9.81;
    double H0 = 1.0;
    double rho = 1000.0;
    double p_atm = 101325.0;
    double c0 = 0.05; // subcriticality/transversality floor
};

enum class OuterBC { Wall, NonReflecting };
enum class VelocityForm { Gradient, Advective };

struct ExteriorParams {
    OuterBC outer = OuterBC::Wall;
    VelocityForm velocity_form = VelocityForm::Gradient;
    double cfl = 0.4;
    double filter_cutoff = 2.0 / 3.0; // fraction of modes kept unfiltered
    double filter_alpha = 36.0;
};

/// Surface elevation and velocity on the exterior chart r in [0, R_ext].
struct ExteriorState {
    Field zeta;
    VecField v;
    double t = 0.0;

    ExteriorState() = default;
    ExteriorState(size_t nr, size_t ns) : zeta(nr, ns), v(nr, ns) {}
    size_t nr() const { return zeta.nr(); }
    size_t ns() const { return zeta.ns(); }
};

/// Symmetrizer Sigma(u) = [[g, w^T], [w, h I]] at one node; positive definite
/// iff g h - |w|^2 > 0.
struct Symmetrizer {
    double g, h;
    Vec2 w;

    double margin() const { return g * h - w.norm2(); }
    // 3x3 entries (row-major, for tests and the linear-stepper check)
    std::array<double, 9> matrix() const {
        return {g, w.x, w.y, w.x, h, 0.0, w.y, 0.0, h};
    }
};

Symmetrizer symmetrizer(double g, double h, const Vec2& w);

/// Boundary data imposed along the contact ring (r = 0).
struct ContactRingData {
    std::vector<double> zeta_i;    // elevation target (trace of the obstacle)
    std::vector<double> flux;      // N^phi . (h v) target = DN flux of psi_i
    std::vector<double> v_tan_i;   // interior tangential velocity (n^perp . v_i)
    bool has_vtan = false;
};

/// Tendencies of the transformed shallow water system.
struct ExteriorTendencies {
    Field dzeta;
    VecField dv;

    ExteriorTendencies() = default;
    ExteriorTendencies(size_t nr, size_t ns) : dzeta(nr, ns), dv(nr, ns) {}
};

/// Right-hand side of the transformed equations:
///   d_t zeta = d_t phi . grad^phi zeta - div^phi(h v)
///   d_t v    = d_t phi-transport      - grad^phi(|v|^2/2 + g zeta)   (gradient form)
/// or the advective form -(v.grad^phi)v - g grad^phi zeta + (d_t phi.grad^phi) v.
/// Returns the subcriticality margin min(g h - |w|^2) as a side report.
double rhs_exterior(const ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
                    VelocityForm form, ExteriorTendencies& out);

/// Characteristic reconstruction of the boundary rows.  At the contact ring
/// the incoming field is built from (zeta_i, DN flux); outgoing and, when the
/// chart-relative normal velocity is outgoing, tangential fields come from the
/// interior of the domain.  At the outer ring the wall reflects the normal
/// flux (or a still-water incoming field for the non-reflecting variant).
/// Throws SupercriticalBoundary (as SubcriticalViolated) when the incoming /
/// outgoing split degenerates.
void characteristic_bc(ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
                       const ContactRingData& ring, OuterBC outer,
                       const VecField* dphi_dt_prev = nullptr);

/// CFL time step bound.
double cfl_dt(const ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
              double cfl);

/// max(0, -min h) guard and subcriticality margin over the grid.
struct StateMargins {
    double min_h;
    double min_subcrit; // min over nodes of g h - |w|^2
};
StateMargins state_margins(const ExteriorState& st, const DiffeoField& d,
                           const PhysicsParams& phys);

/// Exponential spectral filter applied in place to the evolved fields.
void filter_state(const NTGrid& grid, const ExteriorParams& params, ExteriorState& st);

/// Standalone exterior step (frozen diffeomorphism and ring data): one
/// SSP-RK2 step of the transformed system with the characteristic boundary
/// applied each stage, then the spectral filter.  Throws on depth or
/// subcriticality loss.
ExteriorState step_exterior(const ExteriorState& st, const DiffeoField& d,
                            const PhysicsParams& phys, const ExteriorParams& params,
                            const ContactRingData& ring, double dt);

} // namespace foswe
