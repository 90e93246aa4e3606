#pragma once

#include <vector>

#include "foswe/exterior.hpp"
#include "foswe/interior.hpp"

namespace foswe {

/// Boundary traces of both regions along the contact ring, with the one-sided
/// normal derivatives entering the contact-line quotient.  Extraction uses
/// 3-point one-sided stencils on each side (2nd order).
struct CouplingTrace {
    std::vector<double> zeta;      // exterior elevation trace
    std::vector<Vec2> v;           // exterior velocity trace
    std::vector<double> zeta_i;    // interior (obstacle) elevation trace
    std::vector<Vec2> v_i;         // interior velocity trace
    std::vector<double> dn_zeta;   // N . grad zeta, exterior one-sided
    std::vector<double> dn_zeta_i; // N . grad zeta_i, interior one-sided
    std::vector<double> div_hv;    // div^phi(h v) trace (exterior one-sided)
    std::vector<Vec2> nphi;        // N^phi along the ring
    std::vector<double> nphi_len;
    std::vector<Vec2> dphi_dt;     // chart velocity on the ring
    std::vector<double> dn_flux;   // Lambda_phi psi_i

    size_t ns() const { return zeta.size(); }

    /// max_s |v - v_i| (emergent velocity-trace continuity monitor).
    double velocity_gap() const;
};

CouplingTrace extract_trace(const ExteriorState& ext, const DiffeoField& d_ext,
                            const InteriorState& interior, const DiffeoField& d_int,
                            const PhysicsParams& phys);

/// Contact-line evolution d_t gamma = div^phi(hv) / (N.grad(zeta - zeta_i))
/// evaluated on the ring.  Throws TransversalityLost when the denominator
/// margin drops below c0.
std::vector<double> gamma_rhs(const CouplingTrace& trace, double c0);

/// Trace potential evolution d_t psi_i = d_t phi . v - |v|^2/2 - g zeta.
std::vector<double> psi_rhs(const CouplingTrace& trace, double g);

/// min_s |N.grad(zeta - zeta_i)| (reporting only).
double transversality(const CouplingTrace& trace);

} // namespace foswe
