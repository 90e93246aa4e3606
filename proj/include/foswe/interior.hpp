#pragma once

#include <memory>
#include <vector>

#include "foswe/core.hpp"
#include "foswe/geometry.hpp"
#include "foswe/hanzawa.hpp"
#include "foswe/obstacle.hpp"

namespace foswe {

/// Discrete divergence-form operator for the wetted-region potential problem
/// on the interior chart, with the contact ring (last radial node, r = 0) as
/// a Dirichlet boundary and a one-cell pole patch closing the chart center.
///
/// The operator is assembled in weak form,
///     a(u, w) = sum over nodes  (D w)^T K (D u) * quad
/// with the chart coefficient K = h_w * det(dtheta~) * (dtheta~)^{-1}(dtheta~)^{-T}
/// (the pulled-back matrix J h_w (dphi)^{-1}(dphi)^{-T} of the physical
/// problem), which keeps it exactly symmetric and negative semidefinite
/// regardless of the stencils used.  Solves run conjugate gradients
/// preconditioned by the direct factorization of the arc-averaged operator,
/// which is Fourier-diagonal and refreshed whenever the diffeomorphism
/// drifts; at phi = id the preconditioner is the operator itself.
class EllipticOperator {
public:
    EllipticOperator(const NTGrid& grid, const DiffeoField& diffeo, const ObstacleSpec& obs);

    const NTGrid& grid() const { return *grid_; }

    /// Apply the (negative semidefinite) operator to interior+pole unknowns;
    /// ring values of u participate but ring rows of out are the raw flux
    /// residuals used by the variational DN extraction.
    void apply(const Field& u, double u_pole, Field& out, double& out_pole) const;

    /// Solve a(u,.) = rhs with u|ring = psi.  Optional volume source f adds
    /// \int f w (with J-weighted quadrature) to the right-hand side.
    /// Warm start from `u` contents when warm == true.
    void solve(const std::vector<double>& psi, Field& u, double& u_pole,
               const Field* source = nullptr, bool warm = false) const;

    /// Refresh threshold bookkeeping: relative max-norm drift of dtheta~
    /// since the preconditioner was built.
    double drift_since_factorization(const DiffeoField& diffeo) const;

    /// Variational conormal flux at the ring: lambda_j = a(u, e_j)/(ds) where
    /// e_j is the ring nodal function; equals N^phi . (h_w grad^phi phi_i) to
    /// truncation order and is exactly symmetric/compatible.
    std::vector<double> dn_flux(const Field& u, double u_pole) const;

    /// Per-node smallest eigenvalue of K (degeneracy check).
    double min_coefficient_eig() const { return min_eig_; }

    int last_iterations() const { return last_iters_; }
    double last_residual() const { return last_residual_; }

    const Field& K11() const { return k11_; }
    const Field& K12() const { return k12_; }
    const Field& K22() const { return k22_; }
    const Field& hw() const { return hw_; }

private:
    void build_preconditioner();
    void precondition(const Field& r, double r_pole, Field& z, double& z_pole) const;

    const NTGrid* grid_;
    size_t nr_, ns_;
    Field k11_, k12_, k22_; // chart coefficient matrix per node
    Field hw_;              // h_w at moved nodes
    Field wquad_;           // dr x ds quadrature weight per node
    double pole_coef_ = 0.0;
    double min_eig_ = 0.0;
    MatField dtheta_snapshot_;

    // Fourier-diagonal preconditioner: for each mode k a symmetric
    // pentadiagonal factorization over radial nodes (plus pole for k=0).
    struct ModeSolver;
    std::shared_ptr<std::vector<ModeSolver>> modes_;
    mutable int last_iters_ = 0;
    mutable double last_residual_ = 0.0;
};

/// Potential flow under the body: the solve product plus derived fields.
struct InteriorState {
    Field phi;          // potential on the interior chart
    double phi_pole;    // center value
    VecField v;         // grad^phi phi
    Field zeta;         // surface = Z_w at moved nodes
    Field h;            // H0 + zeta
    std::vector<double> dn; // DN flux at the ring
    double t = 0.0;

    Field pressure;     // recovered interior pressure (diagnostic)
    bool has_pressure = false;
};

/// Solve the interior problem for Dirichlet trace psi on the ring and derive
/// velocity and depth fields.
InteriorState solve_interior(const EllipticOperator& op, const DiffeoField& diffeo,
                             const ObstacleSpec& obs, const std::vector<double>& psi,
                             const InteriorState* warm = nullptr);

/// DN map applied to psi (assembles nothing; uses an existing operator).
std::vector<double> dn_map(const EllipticOperator& op, const DiffeoField& diffeo,
                           const ObstacleSpec& obs, const std::vector<double>& psi);

/// Recover the interior pressure from two consecutive solves (BDF1 in time):
///   p = P_atm - rho (d_t phi_i - d_t phi . v_i + |v_i|^2/2 + g zeta_i).
Field recover_pressure(const InteriorState& prev, const InteriorState& curr,
                       const DiffeoField& diffeo, double dt, double rho, double g,
                       double p_atm);

} // namespace foswe
