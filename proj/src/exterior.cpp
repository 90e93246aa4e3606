#include "foswe/exterior.hpp"

#include <algorithm>
#include <cmath>

namespace foswe {

Symmetrizer symmetrizer(double g, double h, const Vec2& w) { return Symmetrizer{g, h, w}; }

double rhs_exterior(const ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
                    VelocityForm form, ExteriorTendencies& out) {
    const size_t nr = st.nr(), ns = st.ns();
    Field h(nr, ns);
    VecField hv(nr, ns);
    double min_margin = 1e300;
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) {
            double hij = phys.H0 + st.zeta(i, j);
            h(i, j) = hij;
            Vec2 vij = st.v.at(i, j);
            hv.set(i, j, hij * vij);
            Vec2 w = vij - d.dphi_dt.at(i, j);
            min_margin = std::min(min_margin, phys.g * hij - w.norm2());
        }

    Field div_hv(nr, ns);
    d.divphi(hv, div_hv);
    VecField grad_zeta(nr, ns);
    d.gradphi(st.zeta, grad_zeta);

    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j)
            out.dzeta(i, j) = -div_hv(i, j) + d.dphi_dt.at(i, j).dot(grad_zeta.at(i, j));

    if (form == VelocityForm::Gradient) {
        Field bern(nr, ns);
        for (size_t i = 0; i < nr; ++i)
            for (size_t j = 0; j < ns; ++j) {
                Vec2 vij = st.v.at(i, j);
                bern(i, j) = 0.5 * vij.norm2() + phys.g * st.zeta(i, j);
            }
        VecField grad_bern(nr, ns);
        d.gradphi(bern, grad_bern);
        MatField dv(nr, ns);
        d.gradphi_mat(st.v, dv);
        for (size_t i = 0; i < nr; ++i)
            for (size_t j = 0; j < ns; ++j) {
                Vec2 transport = dv.at(i, j) * d.dphi_dt.at(i, j);
                out.dv.set(i, j, transport - grad_bern.at(i, j));
            }
    } else {
        MatField dv(nr, ns);
        d.gradphi_mat(st.v, dv);
        for (size_t i = 0; i < nr; ++i)
            for (size_t j = 0; j < ns; ++j) {
                Vec2 w = st.v.at(i, j) - d.dphi_dt.at(i, j);
                Vec2 adv = dv.at(i, j) * w;
                out.dv.set(i, j, Vec2{0, 0} - adv - phys.g * grad_zeta.at(i, j));
            }
    }
    return min_margin;
}

void characteristic_bc(ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
                       const ContactRingData& ring, OuterBC outer,
                       const VecField* dphi_dt_prev) {
    const size_t ns = st.ns();
    const size_t last = st.nr() - 1;
    const VecField& dphi_dt = dphi_dt_prev ? *dphi_dt_prev : d.dphi_dt;

    // Contact ring: boundary of the exterior domain with inward-pointing
    // reference normal (N points from the wetted region into the water).
    for (size_t j = 0; j < ns; ++j) {
        Vec2 Np = d.Nphi.at(0, j);
        double Nlen = d.Nphi_len(0, j);
        Vec2 n = Np / Nlen;
        double h = phys.H0 + st.zeta(0, j);
        if (h <= 0.0)
            throw SimError(ErrorCode::DepthNonpositive, "depth vanished on the contact ring");
        double c = std::sqrt(phys.g * h);
        Vec2 v = st.v.at(0, j);
        Vec2 w = v - dphi_dt.at(0, j);
        double wn = n.dot(w);
        if (std::abs(wn) >= c)
            throw SimError(ErrorCode::SubcriticalViolated,
                           "supercritical contact ring: |n.w| >= sqrt(g h)");
        double a_out = c * st.zeta(0, j) - h * n.dot(v);
        double a_in = c * ring.zeta_i[j] + ring.flux[j] / Nlen;
        double zeta_new = (a_in + a_out) / (2.0 * c);
        double hvn = (a_in - a_out) / 2.0;
        double hvt = h * n.perp().dot(v);
        if (ring.has_vtan && wn > 0.0) hvt = h * ring.v_tan_i[j];
        st.zeta(0, j) = zeta_new;
        st.v.set(0, j, (hvn * n + hvt * n.perp()) / h);
    }

    // Outer ring: outward normal, phi = id there.
    for (size_t j = 0; j < ns; ++j) {
        Vec2 n = d.Nphi.at(last, j) / d.Nphi_len(last, j);
        double h = phys.H0 + st.zeta(last, j);
        if (h <= 0.0)
            throw SimError(ErrorCode::DepthNonpositive, "depth vanished on the outer ring");
        double c = std::sqrt(phys.g * h);
        Vec2 v = st.v.at(last, j);
        double a_out = c * st.zeta(last, j) + h * n.dot(v);
        double a_in, hvt = h * n.perp().dot(v);
        if (outer == OuterBC::Wall) {
            a_in = a_out;
        } else {
            a_in = 0.0;
            if (n.dot(v) < 0.0) hvt = 0.0;
        }
        st.zeta(last, j) = (a_out + a_in) / (2.0 * c);
        double hvn = (a_out - a_in) / 2.0;
        st.v.set(last, j, (hvn * n + hvt * n.perp()) / h);
    }
}

double cfl_dt(const ExteriorState& st, const DiffeoField& d, const PhysicsParams& phys,
              double cfl) {
    const NTGrid& grid = d.grid();
    const size_t nr = st.nr(), ns = st.ns();
    const double ds = grid.curve().ds();
    double dt = 1e300;
    for (size_t i = 0; i < nr; ++i) {
        double dr_cell = (i == 0) ? grid.r_node(1) - grid.r_node(0)
                                  : grid.r_node(i) - grid.r_node(i - 1);
        for (size_t j = 0; j < ns; ++j) {
            double h = phys.H0 + st.zeta(i, j);
            if (h <= 0.0)
                throw SimError(ErrorCode::DepthNonpositive, "nonpositive depth in CFL scan");
            Mat2 dth = d.dtheta.at(i, j);
            double len_r = Vec2{dth.a11, dth.a21}.norm() * dr_cell;
            double len_s = Vec2{dth.a12, dth.a22}.norm() * ds;
            Vec2 w = st.v.at(i, j) - d.dphi_dt.at(i, j);
            double speed = w.norm() + std::sqrt(phys.g * h);
            dt = std::min(dt, std::min(len_r, len_s) / speed);
        }
    }
    return cfl * dt;
}

StateMargins state_margins(const ExteriorState& st, const DiffeoField& d,
                           const PhysicsParams& phys) {
    StateMargins m{1e300, 1e300};
    for (size_t i = 0; i < st.nr(); ++i)
        for (size_t j = 0; j < st.ns(); ++j) {
            double h = phys.H0 + st.zeta(i, j);
            Vec2 w = st.v.at(i, j) - d.dphi_dt.at(i, j);
            m.min_h = std::min(m.min_h, h);
            m.min_subcrit = std::min(m.min_subcrit, phys.g * h - w.norm2());
        }
    return m;
}

ExteriorState step_exterior(const ExteriorState& st, const DiffeoField& d,
                            const PhysicsParams& phys, const ExteriorParams& params,
                            const ContactRingData& ring, double dt) {
    auto stage = [&](const ExteriorState& s, ExteriorState& out) {
        ExteriorState corr = s;
        characteristic_bc(corr, d, phys, ring, params.outer);
        ExteriorTendencies tend(s.nr(), s.ns());
        double margin = rhs_exterior(corr, d, phys, params.velocity_form, tend);
        if (margin <= 0.0)
            throw SimError(ErrorCode::SubcriticalViolated,
                           "subcriticality lost in exterior step");
        out = corr;
        for (size_t i = 0; i < s.nr(); ++i)
            for (size_t j = 0; j < s.ns(); ++j) {
                out.zeta(i, j) += dt * tend.dzeta(i, j);
                out.v.x(i, j) += dt * tend.dv.x(i, j);
                out.v.y(i, j) += dt * tend.dv.y(i, j);
            }
        return corr;
    };
    ExteriorState u1(st.nr(), st.ns());
    ExteriorState base = stage(st, u1);
    ExteriorState u2(st.nr(), st.ns());
    stage(u1, u2);
    ExteriorState out = base;
    for (size_t i = 0; i < st.nr(); ++i)
        for (size_t j = 0; j < st.ns(); ++j) {
            out.zeta(i, j) = 0.5 * (base.zeta(i, j) + u2.zeta(i, j));
            out.v.x(i, j) = 0.5 * (base.v.x(i, j) + u2.v.x(i, j));
            out.v.y(i, j) = 0.5 * (base.v.y(i, j) + u2.v.y(i, j));
        }
    filter_state(d.grid(), params, out);
    out.t = st.t + dt;
    return out;
}

void filter_state(const NTGrid& grid, const ExteriorParams& params, ExteriorState& st) {
    const Spectral& sp = grid.spectral();
    auto mult = sp.exp_filter_multipliers(params.filter_cutoff, params.filter_alpha);
    for (size_t i = 0; i < st.nr(); ++i) {
        sp.apply_multiplier(st.zeta.row(i), st.zeta.row(i), mult);
        sp.apply_multiplier(st.v.x.row(i), st.v.x.row(i), mult);
        sp.apply_multiplier(st.v.y.row(i), st.v.y.row(i), mult);
    }
}

} // namespace foswe
