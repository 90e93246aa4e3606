#pragma once

#include <vector>

#include "foswe/bump.hpp"
#include "foswe/contact_line.hpp"
#include "foswe/core.hpp"
#include "foswe/geometry.hpp"

namespace foswe {

/// Parameters of the regularizing diffeomorphism construction.
struct HanzawaParams {
    double eps = 0.1;        // Fourier-multiplier smoothing scale
    double eta0 = 0.3;       // tube-containment fraction, |gamma| <= eta0*r0
    double jac_floor = 1e-6; // fatal floor for det(dphi)

    Bump chi{0.25}; // shared cutoff family: chi=1 for |x|<=1/4, 0 for |x|>=1

    /// delta0 derived from eta0 via |gamma| <= r0/(1+delta0)^2.
    double delta0() const { return 1.0 / std::sqrt(eta0) - 1.0; }
    /// Lower bound target for d_r R from the construction.
    double drR_target() const {
        double d = delta0();
        return d / (2.0 * (1.0 + d));
    }
};

/// The diffeomorphism phi(t, .) sampled on an NTGrid, with everything needed
/// to differentiate through the moved chart theta Tilde(r,s) = x(s) + R(r,s) n(s):
/// fields of the map, its chart Jacobian, the Cartesian Jacobian dphi, the
/// conormal N^phi, and the chart velocity d_t phi.
class DiffeoField {
public:
    DiffeoField(const NTGrid& grid, const HanzawaParams& params);

    const NTGrid& grid() const { return *grid_; }
    const HanzawaParams& params() const { return params_; }

    // Scalar construction data.
    Field R;      // R(r,s) = r + gamma_ext * chi(r/r0)
    Field dR_dr;  // d_r R
    Field dR_ds;  // d_s R (spectral)
    Field dR_dt;  // d_t R from d_t gamma

    VecField position;  // theta~(r,s) = x(s) + R n(s)
    VecField phi_tilde; // phi - id = (R - r) n(s)
    VecField dphi_dt;   // chart velocity d_t phi = (d_t R) n(s)

    MatField dtheta;     // d theta~ / d(r,s) (columns: d_r, d_s)
    MatField dtheta_inv; // its inverse
    Field chart_det;     // det dtheta~ = d_r R * (1 + R kappa)

    MatField dphi;  // Cartesian Jacobian d phi = dtheta~ (dtheta)^{-1}
    Field J;        // det dphi
    VecField Nphi;  // conormal J (dphi)^{-T} N_underline
    Field Nphi_len; // |N^phi|

    double min_J = 1.0;
    double min_drR = 1.0;

    // -- differential operators through the moved chart --------------------

    /// nabla^phi f = (dtheta~)^{-T} (d_r f, d_s f).
    void gradphi(const Field& f, VecField& out) const;
    /// Conservative divergence: (1/Jc) [ d_r(Jc (B F)_r) + d_s(Jc (B F)_s) ],
    /// B = (dtheta~)^{-1}.
    void divphi(const VecField& f, Field& out) const;
    /// (nabla^phi)^perp . f = d1^phi f2 - d2^phi f1 (via gradphi of components).
    void curlphi(const VecField& f, Field& out) const;
    /// Full Jacobian d^phi v (per-node 2x2 with rows nabla^phi v_k).
    void gradphi_mat(const VecField& v, MatField& out) const;

    /// Integral over the chart of f with the physical measure J dy
    /// (= f * chart_det dr ds).
    double integrate_J(const Field& f) const;

    /// Rebuild dR_dt / dphi_dt from a new d_t gamma (the construction is
    /// linear in gamma apart from the fixed cutoffs); geometry is untouched.
    void set_time_derivative(const std::vector<double>& dgamma_dt);

private:
    const NTGrid* grid_;
    HanzawaParams params_;
};

/// Fourier-multiplier extension gamma_ext(r_i, s) = chi(eps * r_i * <k>) applied
/// to gamma-hat, sampled at every radial node of the grid.
Field extend_gamma(const NTGrid& grid, const std::vector<double>& gamma,
                   const HanzawaParams& params);

/// Build the diffeomorphism from the contact line.  Throws JacobianDegenerate
/// when min det(dphi) <= params.jac_floor.
DiffeoField build_diffeo(const NTGrid& grid, const ContactLine& line,
                         const HanzawaParams& params);

/// Deterministic epsilon calibration: start from the analytic guess and halve
/// until min d_r R >= drR_target() on the grid.  Returns the calibrated value.
double calibrate_epsilon(const NTGrid& grid, const ContactLine& line, HanzawaParams params,
                         int max_halvings = 40);

/// Norm report for the derivative estimates of the construction.
struct DiffeoBoundsReport {
    double min_J = 0.0;
    double min_drR = 0.0;
    // For each order m = 0..2: max over |alpha| = m (spatial derivatives) of
    // ||d^alpha phi_tilde||_{L2} and _{L4}, and the norm |gamma|_m.
    std::vector<double> phi_l2;
    std::vector<double> phi_l4;
    std::vector<double> gamma_m;
};

DiffeoBoundsReport check_diffeo_bounds(const DiffeoField& d, const ContactLine& line, int m_max = 2);

} // namespace foswe
