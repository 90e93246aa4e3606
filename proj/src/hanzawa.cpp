#include "foswe/hanzawa.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace foswe {

namespace {

// Applies the per-radius multiplier chi(eps * r * <k>) to the spectrum of g.
void extend_rows(const NTGrid& grid, const std::vector<double>& g, const HanzawaParams& p,
                 Field& out) {
    const Spectral& sp = grid.spectral();
    const size_t nm = sp.nmodes();
    std::vector<std::complex<double>> coeff(nm);
    sp.analyze(g.data(), coeff.data());
    std::vector<std::complex<double>> row(nm);
    std::vector<double> buf(grid.ns());
    for (size_t i = 0; i < grid.nr(); ++i) {
        const double r = grid.r_node(i);
        for (size_t k = 0; k < nm; ++k)
            row[k] = coeff[k] * p.chi(p.eps * r * sp.bracket(k));
        sp.synthesize(row.data(), buf.data());
        std::copy(buf.begin(), buf.end(), out.row(i));
    }
}

} // namespace

Field extend_gamma(const NTGrid& grid, const std::vector<double>& gamma,
                   const HanzawaParams& params) {
    Field out(grid.nr(), grid.ns());
    extend_rows(grid, gamma, params, out);
    return out;
}

DiffeoField::DiffeoField(const NTGrid& grid, const HanzawaParams& params)
    : R(grid.nr(), grid.ns()),
      dR_dr(grid.nr(), grid.ns()),
      dR_ds(grid.nr(), grid.ns()),
      dR_dt(grid.nr(), grid.ns()),
      position(grid.nr(), grid.ns()),
      phi_tilde(grid.nr(), grid.ns()),
      dphi_dt(grid.nr(), grid.ns()),
      dtheta(grid.nr(), grid.ns()),
      dtheta_inv(grid.nr(), grid.ns()),
      chart_det(grid.nr(), grid.ns()),
      dphi(grid.nr(), grid.ns()),
      J(grid.nr(), grid.ns()),
      Nphi(grid.nr(), grid.ns()),
      Nphi_len(grid.nr(), grid.ns()),
      grid_(&grid),
      params_(params) {}

DiffeoField build_diffeo(const NTGrid& grid, const ContactLine& line,
                         const HanzawaParams& params) {
    if (line.ns() != grid.ns())
        throw SimError(ErrorCode::InvalidArgument, "gamma sample count does not match grid");
    DiffeoField d(grid, params);
    const ReferenceCurve& curve = grid.curve();
    const double r0 = curve.tube_halfwidth;
    const size_t nr = grid.nr(), ns = grid.ns();

    Field gext = extend_gamma(grid, line.gamma, params);
    Field gext_dt = extend_gamma(grid, line.dgamma_dt, params);

    // R = r + gamma_ext * chi(r/r0); the cutoff chi(r/r0) confines the
    // perturbation to the tube so phi = id outside it, exactly.
    for (size_t i = 0; i < nr; ++i) {
        const double r = grid.r_node(i);
        const double cut = params.chi(r / r0);
        for (size_t j = 0; j < ns; ++j) {
            d.R(i, j) = r + gext(i, j) * cut;
            d.dR_dt(i, j) = gext_dt(i, j) * cut;
        }
    }
    grid.d_r(d.R, d.dR_dr);
    grid.d_s(d.R, d.dR_ds);
    // d_r R from the construction: chain rule beats grid FD through the
    // cutoffs (both chi factors have exact derivatives).
    {
        const Spectral& sp = grid.spectral();
        const size_t nm = sp.nmodes();
        std::vector<std::complex<double>> coeff(nm), row(nm);
        sp.analyze(line.gamma.data(), coeff.data());
        std::vector<double> dgext_dr(ns);
        for (size_t i = 0; i < nr; ++i) {
            const double r = grid.r_node(i);
            const double cut = params.chi(r / r0);
            const double dcut = params.chi.derivative(r / r0) / r0;
            for (size_t k = 0; k < nm; ++k) {
                double br = sp.bracket(k);
                row[k] = coeff[k] * (params.eps * br * params.chi.derivative(params.eps * r * br));
            }
            sp.synthesize(row.data(), dgext_dr.data());
            for (size_t j = 0; j < ns; ++j)
                d.dR_dr(i, j) = 1.0 + dgext_dr[j] * cut + gext(i, j) * dcut;
        }
    }

    double min_drR = 1e300, min_J = 1e300;
    for (size_t i = 0; i < nr; ++i) {
        const double r = grid.r_node(i);
        for (size_t j = 0; j < ns; ++j) {
            const Vec2 n = curve.normal[j];
            const Vec2 t = curve.tangent[j];
            const double kap = curve.curvature[j];
            const double Rv = d.R(i, j);

            d.position.set(i, j, curve.point[j] + Rv * n);
            d.phi_tilde.set(i, j, (Rv - r) * n);
            d.dphi_dt.set(i, j, d.dR_dt(i, j) * n);

            // d theta~: col r = (d_r R) n ; col s = (1 + R kappa) x' + (d_s R) n.
            Vec2 colr = d.dR_dr(i, j) * n;
            Vec2 cols = (1.0 + Rv * kap) * t + d.dR_ds(i, j) * n;
            Mat2 dth{colr.x, cols.x, colr.y, cols.y};
            double det = dth.det();
            d.dtheta.set(i, j, dth);
            d.chart_det(i, j) = det;
            if (det <= params.jac_floor)
                throw SimError(ErrorCode::JacobianDegenerate,
                               "moved chart degenerate: det <= floor");
            d.dtheta_inv.set(i, j, dth.inverse());

            // dphi = dtheta~ (dtheta)^{-1} with dtheta = [n | (1+r kappa) x'].
            Mat2 dth0{n.x, (1.0 + r * kap) * t.x, n.y, (1.0 + r * kap) * t.y};
            Mat2 dphi = dth * dth0.inverse();
            d.dphi.set(i, j, dphi);
            double Jv = dphi.det();
            d.J(i, j) = Jv;

            // N^phi = adj(dphi)^T N = [[d2phi2, -d1phi2], [-d2phi1, d1phi1]] N.
            Vec2 Np{dphi.a22 * n.x - dphi.a21 * n.y, -dphi.a12 * n.x + dphi.a11 * n.y};
            d.Nphi.set(i, j, Np);
            d.Nphi_len(i, j) = Np.norm();

            min_drR = std::min(min_drR, d.dR_dr(i, j));
            min_J = std::min(min_J, Jv);
        }
    }
    d.min_J = min_J;
    d.min_drR = min_drR;
    if (min_J <= params.jac_floor)
        throw SimError(ErrorCode::JacobianDegenerate,
                       "diffeomorphism Jacobian hit the floor: min J = " + std::to_string(min_J));
    return d;
}

double calibrate_epsilon(const NTGrid& grid, const ContactLine& line, HanzawaParams params,
                         int max_halvings) {
    const double d0 = params.delta0();
    double m0norm = grid.spectral().sobolev_norm(line.gamma.data(), 2.0);
    double eps = d0 / (4.0 * (1.0 + d0) * std::max(m0norm, 1.0));
    const double target = params.drR_target();
    for (int it = 0; it < max_halvings; ++it) {
        params.eps = eps;
        try {
            DiffeoField d = build_diffeo(grid, line, params);
            if (d.min_drR >= target) return eps;
        } catch (const SimError&) {
            // degenerate at this eps; keep halving
        }
        eps *= 0.5;
    }
    throw SimError(ErrorCode::JacobianDegenerate,
                   "epsilon calibration failed: gamma too large or rough for the tube");
}

void DiffeoField::gradphi(const Field& f, VecField& out) const {
    const size_t nr = grid_->nr(), ns = grid_->ns();
    Field dr(nr, ns), ds(nr, ns);
    grid_->d_r(f, dr);
    grid_->d_s(f, ds);
    for (size_t i = 0; i < nr; ++i) {
        for (size_t j = 0; j < ns; ++j) {
            Mat2 Bt = dtheta_inv.at(i, j).transpose();
            out.set(i, j, Bt * Vec2{dr(i, j), ds(i, j)});
        }
    }
}

void DiffeoField::divphi(const VecField& f, Field& out) const {
    const size_t nr = grid_->nr(), ns = grid_->ns();
    Field gr(nr, ns), gs(nr, ns), tmp(nr, ns);
    for (size_t i = 0; i < nr; ++i) {
        for (size_t j = 0; j < ns; ++j) {
            Mat2 B = dtheta_inv.at(i, j);
            Vec2 q = B * f.at(i, j);
            double Jc = chart_det(i, j);
            gr(i, j) = Jc * q.x;
            gs(i, j) = Jc * q.y;
        }
    }
    grid_->d_r(gr, out);
    grid_->d_s(gs, tmp);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) out(i, j) = (out(i, j) + tmp(i, j)) / chart_det(i, j);
}

void DiffeoField::curlphi(const VecField& f, Field& out) const {
    const size_t nr = grid_->nr(), ns = grid_->ns();
    VecField g1(nr, ns), g2(nr, ns);
    gradphi(f.x, g1);
    gradphi(f.y, g2);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) out(i, j) = g2.x(i, j) - g1.y(i, j);
}

void DiffeoField::gradphi_mat(const VecField& v, MatField& out) const {
    const size_t nr = grid_->nr(), ns = grid_->ns();
    VecField g1(nr, ns), g2(nr, ns);
    gradphi(v.x, g1);
    gradphi(v.y, g2);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j)
            out.set(i, j, Mat2{g1.x(i, j), g1.y(i, j), g2.x(i, j), g2.y(i, j)});
}

void DiffeoField::set_time_derivative(const std::vector<double>& dgamma_dt) {
    const NTGrid& grid = *grid_;
    Field gext_dt = extend_gamma(grid, dgamma_dt, params_);
    const double r0 = grid.curve().tube_halfwidth;
    for (size_t i = 0; i < grid.nr(); ++i) {
        const double cut = params_.chi(grid.r_node(i) / r0);
        for (size_t j = 0; j < grid.ns(); ++j) {
            dR_dt(i, j) = gext_dt(i, j) * cut;
            dphi_dt.set(i, j, dR_dt(i, j) * grid.curve().normal[j]);
        }
    }
}

double DiffeoField::integrate_J(const Field& f) const {
    const Field& w = grid_->quad_weight();
    double acc = 0.0;
    for (size_t i = 0; i < f.nr(); ++i)
        for (size_t j = 0; j < f.ns(); ++j) acc += f(i, j) * chart_det(i, j) * w(i, j);
    return acc;
}

DiffeoBoundsReport check_diffeo_bounds(const DiffeoField& d, const ContactLine& line, int m_max) {
    const NTGrid& grid = d.grid();
    DiffeoBoundsReport rep;
    rep.min_J = d.min_J;
    rep.min_drR = d.min_drR;

    // Spatial Cartesian derivatives of phi_tilde up to order m via repeated
    // chart gradients; norms with the reference measure (1+r kappa) dr ds.
    auto lp_norms = [&](const std::vector<Field>& comps, double& l2, double& l4) {
        double s2 = 0.0, s4 = 0.0;
        const Field& w = grid.quad_weight();
        const Field& det = grid.theta_det();
        for (const Field& f : comps) {
            for (size_t i = 0; i < f.nr(); ++i)
                for (size_t j = 0; j < f.ns(); ++j) {
                    double v2 = f(i, j) * f(i, j);
                    double m = det(i, j) * w(i, j);
                    s2 += v2 * m;
                    s4 += v2 * v2 * m;
                }
        }
        l2 = std::sqrt(s2);
        l4 = std::pow(s4, 0.25);
    };

    std::vector<Field> level = {d.phi_tilde.x, d.phi_tilde.y};
    for (int m = 0; m <= m_max; ++m) {
        double l2, l4;
        lp_norms(level, l2, l4);
        rep.phi_l2.push_back(l2);
        rep.phi_l4.push_back(l4);
        rep.gamma_m.push_back(line.norm(grid.spectral(), m));
        // next derivative level: Cartesian gradient of every component
        std::vector<Field> next;
        for (const Field& f : level) {
            VecField g(grid.nr(), grid.ns());
            grid.gradient(f, g);
            next.push_back(g.x);
            next.push_back(g.y);
        }
        level = std::move(next);
    }
    return rep;
}

} // namespace foswe
