#include "foswe/coupling.hpp"

#include <cmath>

namespace foswe {

double CouplingTrace::velocity_gap() const {
    double m = 0.0;
    for (size_t j = 0; j < v.size(); ++j) m = std::max(m, (v[j] - v_i[j]).norm());
    return m;
}

CouplingTrace extract_trace(const ExteriorState& ext, const DiffeoField& d_ext,
                            const InteriorState& interior, const DiffeoField& d_int,
                            const PhysicsParams& phys) {
    const NTGrid& ge = d_ext.grid();
    const NTGrid& gi = d_int.grid();
    const size_t ns = ge.ns();
    const size_t ring_i = gi.nr() - 1; // interior grid ends at r = 0

    CouplingTrace tr;
    tr.zeta.resize(ns);
    tr.v.resize(ns);
    tr.zeta_i.resize(ns);
    tr.v_i.resize(ns);
    tr.dn_zeta.resize(ns);
    tr.dn_zeta_i.resize(ns);
    tr.div_hv.resize(ns);
    tr.nphi.resize(ns);
    tr.nphi_len.resize(ns);
    tr.dphi_dt.resize(ns);
    tr.dn_flux = interior.dn;

    // One-sided 3-point stencils toward the ring from each side.
    auto we = one_sided_weights(ge.radial(), /*at_lo=*/true, 3);
    auto wi = one_sided_weights(gi.radial(), /*at_lo=*/false, 3);

    Field h(ext.nr(), ext.ns());
    VecField hv(ext.nr(), ext.ns());
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ns; ++j) {
            double hij = phys.H0 + ext.zeta(i, j);
            h(i, j) = hij;
            hv.set(i, j, hij * ext.v.at(i, j));
        }
    Field div_hv(ext.nr(), ext.ns());
    d_ext.divphi(hv, div_hv);

    for (size_t j = 0; j < ns; ++j) {
        tr.zeta[j] = ext.zeta(0, j);
        tr.v[j] = ext.v.at(0, j);
        tr.zeta_i[j] = interior.zeta(ring_i, j);
        tr.v_i[j] = interior.v.at(ring_i, j);
        tr.nphi[j] = d_ext.Nphi.at(0, j);
        tr.nphi_len[j] = d_ext.Nphi_len(0, j);
        tr.dphi_dt[j] = d_ext.dphi_dt.at(0, j);
        tr.div_hv[j] = div_hv(0, j);

        double dz = 0.0;
        for (int p = 0; p < 3; ++p) dz += we[p] * ext.zeta(p, j);
        tr.dn_zeta[j] = dz;
        double dzi = 0.0;
        for (int p = 0; p < 3; ++p) dzi += wi[p] * interior.zeta(ring_i - 2 + p, j);
        tr.dn_zeta_i[j] = dzi;
    }
    return tr;
}

std::vector<double> gamma_rhs(const CouplingTrace& trace, double c0) {
    const size_t ns = trace.ns();
    std::vector<double> out(ns);
    for (size_t j = 0; j < ns; ++j) {
        double den = trace.dn_zeta[j] - trace.dn_zeta_i[j];
        if (std::abs(den) < c0)
            throw SimError(ErrorCode::TransversalityLost,
                           "transversality margin below c0 at the contact ring");
        out[j] = trace.div_hv[j] / den;
    }
    return out;
}

std::vector<double> psi_rhs(const CouplingTrace& trace, double g) {
    const size_t ns = trace.ns();
    std::vector<double> out(ns);
    for (size_t j = 0; j < ns; ++j) {
        const Vec2& v = trace.v[j];
        out[j] = trace.dphi_dt[j].dot(v) - 0.5 * v.norm2() - g * trace.zeta[j];
    }
    return out;
}

double transversality(const CouplingTrace& trace) {
    double m = 1e300;
    for (size_t j = 0; j < trace.ns(); ++j)
        m = std::min(m, std::abs(trace.dn_zeta[j] - trace.dn_zeta_i[j]));
    return m;
}

} // namespace foswe
