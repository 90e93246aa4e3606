#include "foswe/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace foswe {

const char* DiagnosticsRecord::csv_header() {
    return "t,mass,energy,enstrophy,irrot_max,subcrit_min,transv_min,gamma_min,gamma_max,"
           "char_energy,trace_int,E1,E2,rellich_res,flux_gap";
}

std::string DiagnosticsRecord::csv_row() const {
    char buf[640];
    std::snprintf(buf, sizeof(buf),
                  "%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,%.17e,"
                  "%.17e,%.17e,%.17e",
                  t, mass, energy, enstrophy, irrot_max, subcrit_min, transv_min, gamma_min,
                  gamma_max, char_energy, trace_int, E1, E2, rellich_res, flux_gap);
    return buf;
}

DiagnosticsEngine::DiagnosticsEngine(const Stepper& stepper) : stepper_(&stepper) {
    const Discretization& disc = stepper.disc();
    const Bump& chi = disc.hanzawa.chi;
    const double r0 = disc.curve.tube_halfwidth;
    const NTGrid& ge = *disc.grid_ext;
    chib_ext_ = Field(ge.nr(), ge.ns());
    for (size_t i = 0; i < ge.nr(); ++i) {
        double c = chi(ge.r_node(i) / r0);
        for (size_t j = 0; j < ge.ns(); ++j) chib_ext_(i, j) = c;
    }
    const NTGrid& gi = *disc.grid_int;
    chib_int_ = Field(gi.nr(), gi.ns());
    for (size_t i = 0; i < gi.nr(); ++i) {
        double c = chi(gi.r_node(i) / r0);
        for (size_t j = 0; j < gi.ns(); ++j) chib_int_(i, j) = c;
    }
}

double DiagnosticsEngine::total_mass(const StageEval& eval) const {
    double m = eval.d_ext->integrate_J(eval.corrected.ext.zeta);
    m += eval.d_int->integrate_J(eval.interior->zeta);
    return m;
}

double DiagnosticsEngine::total_energy(const StageEval& eval) const {
    const PhysicsParams& phys = stepper_->disc().physics;
    const ExteriorState& ext = eval.corrected.ext;
    Field dens(ext.nr(), ext.ns());
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ext.ns(); ++j) {
            double h = phys.H0 + ext.zeta(i, j);
            dens(i, j) = 0.5 * phys.rho *
                         (h * ext.v.at(i, j).norm2() + phys.g * ext.zeta(i, j) * ext.zeta(i, j));
        }
    double e = eval.d_ext->integrate_J(dens);
    const InteriorState& in = *eval.interior;
    Field dens_i(in.zeta.nr(), in.zeta.ns());
    for (size_t i = 0; i < in.zeta.nr(); ++i)
        for (size_t j = 0; j < in.zeta.ns(); ++j)
            dens_i(i, j) = 0.5 * phys.rho *
                           (in.h(i, j) * in.v.at(i, j).norm2() +
                            phys.g * in.zeta(i, j) * in.zeta(i, j));
    return e + eval.d_int->integrate_J(dens_i);
}

std::array<double, 3> DiagnosticsEngine::enstrophy_and_vorticity(const StageEval& eval) const {
    const PhysicsParams& phys = stepper_->disc().physics;
    const ExteriorState& ext = eval.corrected.ext;
    Field omega(ext.nr(), ext.ns());
    eval.d_ext->curlphi(ext.v, omega);
    double irrot_max = omega.max_abs();
    Field dens(ext.nr(), ext.ns());
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ext.ns(); ++j) {
            double h = phys.H0 + ext.zeta(i, j);
            dens(i, j) = omega(i, j) * omega(i, j) / h;
        }
    double ens = eval.d_ext->integrate_J(dens);

    const InteriorState& in = *eval.interior;
    Field omega_i(in.zeta.nr(), in.zeta.ns());
    eval.d_int->curlphi(in.v, omega_i);
    double curl_i_max = omega_i.max_abs();
    Field dens_i(in.zeta.nr(), in.zeta.ns());
    for (size_t i = 0; i < in.zeta.nr(); ++i)
        for (size_t j = 0; j < in.zeta.ns(); ++j)
            dens_i(i, j) = omega_i(i, j) * omega_i(i, j) / in.h(i, j);
    ens += eval.d_int->integrate_J(dens_i);
    return {ens, irrot_max, curl_i_max};
}

double DiagnosticsEngine::characteristic_energy(const StageEval& eval, Field* alpha_out,
                                                Field* beta_out) const {
    const PhysicsParams& phys = stepper_->disc().physics;
    const ExteriorState& ext = eval.corrected.ext;
    Field alpha(ext.nr(), ext.ns(), 0.0), beta(ext.nr(), ext.ns(), 0.0);
    Field dens(ext.nr(), ext.ns(), 0.0);
    for (size_t i = 0; i < ext.nr(); ++i)
        for (size_t j = 0; j < ext.ns(); ++j) {
            double cb = chib_ext_(i, j);
            if (cb == 0.0) continue;
            double h = phys.H0 + ext.zeta(i, j);
            Vec2 n = eval.d_ext->Nphi.at(i, j) / eval.d_ext->Nphi_len(i, j);
            Vec2 hv = h * ext.v.at(i, j);
            double a = cb * (std::sqrt(phys.g * h) * ext.zeta(i, j) + n.dot(hv));
            double b = cb * n.perp().dot(hv);
            alpha(i, j) = a;
            beta(i, j) = b;
            dens(i, j) = 0.5 * (a * a + b * b) / h; // a = 1/h weight
        }
    double e = eval.d_ext->integrate_J(dens);
    if (alpha_out) *alpha_out = alpha;
    if (beta_out) *beta_out = beta;
    return e;
}

double DiagnosticsEngine::rellich_residual(const StageEval& eval) const {
    return rellich_grid_residual(*eval.d_int, chib_int_, *eval.interior);
}

double rellich_grid_residual(const DiffeoField& d, const Field& chib, const InteriorState& in) {
    const NTGrid& g = d.grid();
    const size_t nr = g.nr(), ns = g.ns();

    // f = chi_b n^phi (supported in the tube), q = h_i v_i.
    VecField f(nr, ns), q(nr, ns);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) {
            double cb = chib(i, j);
            Vec2 n = d.Nphi.at(i, j) / d.Nphi_len(i, j);
            f.set(i, j, cb * n);
            q.set(i, j, in.h(i, j) * in.v.at(i, j));
        }

    Field fq(nr, ns), fpq(nr, ns);
    VecField inner(nr, ns);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) {
            Vec2 fv = f.at(i, j), qv = q.at(i, j);
            double a = fv.dot(qv), b = fv.perp().dot(qv);
            fq(i, j) = a;
            fpq(i, j) = b;
            inner.set(i, j, (a * a - b * b) * fv + (2.0 * a * b) * fv.perp());
        }
    Field lhs(nr, ns);
    d.divphi(inner, lhs);

    VecField fperp(nr, ns), qcopy = q;
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) fperp.set(i, j, f.at(i, j).perp());
    Field divf(nr, ns), divfperp(nr, ns), divq(nr, ns), curlq(nr, ns);
    d.divphi(f, divf);
    d.divphi(fperp, divfperp);
    d.divphi(q, divq);
    d.curlphi(q, curlq);
    MatField df(nr, ns), dfperp(nr, ns), dq(nr, ns);
    d.gradphi_mat(f, df);
    d.gradphi_mat(fperp, dfperp);
    d.gradphi_mat(q, dq);

    double worst = 0.0;
    for (size_t i = 1; i + 1 < nr; ++i) { // interior rows: one-sided edge rows excluded
        for (size_t j = 0; j < ns; ++j) {
            Vec2 fv = f.at(i, j), qv = q.at(i, j);
            double a = fq(i, j), b = fpq(i, j);
            Vec2 t1 = df.at(i, j) * qv;
            Vec2 t2 = dfperp.at(i, j) * qv.perp();
            double braces = (t1 + t2).dot(qv) + a * divq(i, j) - b * curlq(i, j);
            double rhs = divf(i, j) * (a * a - b * b) + 2.0 * divfperp(i, j) * a * b +
                         2.0 * fv.norm2() * braces;
            worst = std::max(worst, std::abs(lhs(i, j) - rhs));
        }
    }
    return worst;
}

double DiagnosticsEngine::em_monitor(const StageEval& eval, int m, double dt) const {
    const PhysicsParams& phys = stepper_->disc().physics;
    const ExteriorState& ext = eval.corrected.ext;
    const DiffeoField& de = *eval.d_ext;
    const NTGrid& ge = de.grid();
    const size_t nr = ge.nr(), ns = ge.ns();

    // Cartesian first derivatives of the state components and of phi.
    auto l2 = [&](const Field& fx, const DiffeoField& d) {
        Field sq(fx.nr(), fx.ns());
        for (size_t i = 0; i < fx.nr(); ++i)
            for (size_t j = 0; j < fx.ns(); ++j) sq(i, j) = fx(i, j) * fx(i, j);
        return d.integrate_J(sq);
    };

    // Good-unknown residual for one multi-index: D^alpha u - (D^alpha phi . grad^phi) u.
    // Components of u: zeta, v1, v2.
    std::vector<const Field*> comps = {&ext.zeta, &ext.v.x, &ext.v.y};
    std::vector<VecField> gradphi_u(3, VecField(nr, ns));
    de.gradphi(ext.zeta, gradphi_u[0]);
    de.gradphi(ext.v.x, gradphi_u[1]);
    de.gradphi(ext.v.y, gradphi_u[2]);

    // Spatial Cartesian gradients (chart-reconstructed).
    std::vector<VecField> grad_u(3, VecField(nr, ns));
    ge.gradient(ext.zeta, grad_u[0]);
    ge.gradient(ext.v.x, grad_u[1]);
    ge.gradient(ext.v.y, grad_u[2]);

    // d_t u from tendencies; d_t phi known.
    const Field* dtu[3] = {&eval.tend.dzeta, &eval.tend.dv.x, &eval.tend.dv.y};

    // Cartesian derivative fields of phi: d_j phi = dphi columns; d_t phi field.
    auto phi_col = [&](int jdir, size_t i, size_t j) -> Vec2 {
        Mat2 dp = de.dphi.at(i, j);
        return jdir == 0 ? Vec2{dp.a11, dp.a21} : Vec2{dp.a12, dp.a22};
    };

    double total = 0.0;
    if (m == 1) {
        // alpha in {t, x1, x2}.
        for (int c = 0; c < 3; ++c) {
            Field res_t(nr, ns), res_1(nr, ns), res_2(nr, ns);
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    Vec2 gp = gradphi_u[c].at(i, j);
                    res_t(i, j) = (*dtu[c])(i, j) - de.dphi_dt.at(i, j).dot(gp);
                    res_1(i, j) = grad_u[c].x(i, j) - phi_col(0, i, j).dot(gp);
                    res_2(i, j) = grad_u[c].y(i, j) - phi_col(1, i, j).dot(gp);
                }
            total += std::sqrt(l2(res_t, de)) + std::sqrt(l2(res_1, de)) + std::sqrt(l2(res_2, de));
        }
        // + ||u||_{0,e}
        for (int c = 0; c < 3; ++c) total += std::sqrt(l2(*comps[c], de));
    } else {
        // m = 2: build second Cartesian derivative combinations.  Second time
        // derivatives difference consecutive tendencies; before history exists
        // those terms are skipped (monitor stays finite).
        std::vector<Field> dttu;
        bool have_dtt = prev_tend_.has_value() && dt > 0.0;
        if (have_dtt) {
            const Field* prev[3] = {&prev_tend_->dzeta, &prev_tend_->dv.x, &prev_tend_->dv.y};
            for (int c = 0; c < 3; ++c) {
                Field f(nr, ns);
                for (size_t i = 0; i < nr; ++i)
                    for (size_t j = 0; j < ns; ++j)
                        f(i, j) = ((*dtu[c])(i, j) - (*prev[c])(i, j)) / dt;
                dttu.push_back(std::move(f));
            }
        }
        Field dtt_phi_x(nr, ns, 0.0), dtt_phi_y(nr, ns, 0.0);
        if (prev_dphi_dt_ && dt > 0.0) {
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    dtt_phi_x(i, j) = (de.dphi_dt.x(i, j) - prev_dphi_dt_->x(i, j)) / dt;
                    dtt_phi_y(i, j) = (de.dphi_dt.y(i, j) - prev_dphi_dt_->y(i, j)) / dt;
                }
        }
        for (int c = 0; c < 3; ++c) {
            // spatial-spatial (3 combos), time-spatial (2), time-time (1)
            VecField g1(nr, ns), g2(nr, ns);
            ge.gradient(grad_u[c].x, g1);
            ge.gradient(grad_u[c].y, g2);
            VecField gt(nr, ns);
            ge.gradient(*dtu[c], gt);
            VecField gp = gradphi_u[c];

            // Cartesian second derivatives of phi columns.
            VecField dcol1x(nr, ns), dcol1y(nr, ns), dcol2x(nr, ns), dcol2y(nr, ns);
            {
                Field c1x(nr, ns), c1y(nr, ns), c2x(nr, ns), c2y(nr, ns);
                for (size_t i = 0; i < nr; ++i)
                    for (size_t j = 0; j < ns; ++j) {
                        Mat2 dp = de.dphi.at(i, j);
                        c1x(i, j) = dp.a11;
                        c1y(i, j) = dp.a21;
                        c2x(i, j) = dp.a12;
                        c2y(i, j) = dp.a22;
                    }
                ge.gradient(c1x, dcol1x);
                ge.gradient(c1y, dcol1y);
                ge.gradient(c2x, dcol2x);
                ge.gradient(c2y, dcol2y);
            }
            VecField gtphix(nr, ns), gtphiy(nr, ns);
            ge.gradient(de.dphi_dt.x, gtphix);
            ge.gradient(de.dphi_dt.y, gtphiy);

            auto add_term = [&](const Field& d2u, const Vec2* d2phi_at, Field& out) {
                for (size_t i = 0; i < nr; ++i)
                    for (size_t j = 0; j < ns; ++j)
                        out(i, j) = d2u(i, j) - d2phi_at[i * ns + j].dot(gp.at(i, j));
            };
            std::vector<Vec2> buf(nr * ns);
            Field res(nr, ns);

            // xx
            Field d2(nr, ns);
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    d2(i, j) = g1.x(i, j);
                    buf[i * ns + j] = {dcol1x.x(i, j), dcol1y.x(i, j)};
                }
            add_term(d2, buf.data(), res);
            total += std::sqrt(l2(res, de));
            // xy
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    d2(i, j) = g1.y(i, j);
                    buf[i * ns + j] = {dcol1x.y(i, j), dcol1y.y(i, j)};
                }
            add_term(d2, buf.data(), res);
            total += std::sqrt(l2(res, de));
            // yy
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    d2(i, j) = g2.y(i, j);
                    buf[i * ns + j] = {dcol2x.y(i, j), dcol2y.y(i, j)};
                }
            add_term(d2, buf.data(), res);
            total += std::sqrt(l2(res, de));
            // tx, ty
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    d2(i, j) = gt.x(i, j);
                    buf[i * ns + j] = {gtphix.x(i, j), gtphiy.x(i, j)};
                }
            add_term(d2, buf.data(), res);
            total += std::sqrt(l2(res, de));
            for (size_t i = 0; i < nr; ++i)
                for (size_t j = 0; j < ns; ++j) {
                    d2(i, j) = gt.y(i, j);
                    buf[i * ns + j] = {gtphix.y(i, j), gtphiy.y(i, j)};
                }
            add_term(d2, buf.data(), res);
            total += std::sqrt(l2(res, de));
            // tt
            if (have_dtt) {
                for (size_t i = 0; i < nr; ++i)
                    for (size_t j = 0; j < ns; ++j) {
                        d2(i, j) = dttu[c](i, j);
                        buf[i * ns + j] = {dtt_phi_x(i, j), dtt_phi_y(i, j)};
                    }
                add_term(d2, buf.data(), res);
                total += std::sqrt(l2(res, de));
            }
        }
        // + ||u||_{1,e} = ||u||_{H1} + ||d_t u||_{L2}
        for (int c = 0; c < 3; ++c) {
            total += std::sqrt(l2(*comps[c], de) + l2(grad_u[c].x, de) + l2(grad_u[c].y, de));
            total += std::sqrt(l2(*dtu[c], de));
        }
    }

    // Interior v_i part: spatial good unknowns only (time derivatives of the
    // interior solve enter through the stored history when present).
    const InteriorState& in = *eval.interior;
    const DiffeoField& di = *eval.d_int;
    const NTGrid& gi = di.grid();
    std::vector<const Field*> icomps = {&in.v.x, &in.v.y};
    for (const Field* f : icomps) {
        VecField gp(gi.nr(), gi.ns()), gc(gi.nr(), gi.ns());
        di.gradphi(*f, gp);
        gi.gradient(*f, gc);
        if (m == 1) {
            Field r1(gi.nr(), gi.ns()), r2(gi.nr(), gi.ns());
            for (size_t i = 0; i < gi.nr(); ++i)
                for (size_t j = 0; j < gi.ns(); ++j) {
                    Mat2 dp = di.dphi.at(i, j);
                    r1(i, j) = gc.x(i, j) - Vec2{dp.a11, dp.a21}.dot(gp.at(i, j));
                    r2(i, j) = gc.y(i, j) - Vec2{dp.a12, dp.a22}.dot(gp.at(i, j));
                }
            total += std::sqrt(l2(r1, di)) + std::sqrt(l2(r2, di));
            total += std::sqrt(l2(*f, di));
            // time part via history
            if (prev_vi_ && dt > 0.0) {
                Field rt(gi.nr(), gi.ns());
                const Field& pv = (f == &in.v.x) ? prev_vi_->x : prev_vi_->y;
                for (size_t i = 0; i < gi.nr(); ++i)
                    for (size_t j = 0; j < gi.ns(); ++j) {
                        double dtv = (((*f)(i, j)) - pv(i, j)) / dt;
                        rt(i, j) = dtv - di.dphi_dt.at(i, j).dot(gp.at(i, j));
                    }
                total += std::sqrt(l2(rt, di));
            }
        } else {
            // m = 2: spatial-spatial good unknowns of v_i.
            VecField g1(gi.nr(), gi.ns()), g2(gi.nr(), gi.ns());
            gi.gradient(gc.x, g1);
            gi.gradient(gc.y, g2);
            Field res(gi.nr(), gi.ns());
            for (size_t i = 0; i < gi.nr(); ++i)
                for (size_t j = 0; j < gi.ns(); ++j) res(i, j) = g1.x(i, j);
            total += std::sqrt(l2(res, di));
            for (size_t i = 0; i < gi.nr(); ++i)
                for (size_t j = 0; j < gi.ns(); ++j) res(i, j) = g1.y(i, j);
            total += std::sqrt(l2(res, di));
            for (size_t i = 0; i < gi.nr(); ++i)
                for (size_t j = 0; j < gi.ns(); ++j) res(i, j) = g2.y(i, j);
            total += std::sqrt(l2(res, di));
            total += std::sqrt(l2(*f, di) + l2(gc.x, di) + l2(gc.y, di));
        }
    }
    (void)phys;
    return total;
}

double DiagnosticsEngine::flux_gap(const StageEval& eval, double dt) const {
    const PhysicsParams& phys = stepper_->disc().physics;
    const CouplingTrace& tr = eval.trace;
    const InteriorState& in = *eval.interior;
    const size_t ring = in.zeta.nr() - 1;

    // Interior pressure trace (P_atm when no history yet).
    Field p;
    bool have_p = prev_interior_.has_value() && dt > 0.0;
    if (have_p)
        p = recover_pressure(*prev_interior_, in, *eval.d_int, dt, phys.rho, phys.g, phys.p_atm);

    double worst = 0.0;
    for (size_t j = 0; j < tr.ns(); ++j) {
        double h = phys.H0 + tr.zeta[j];
        double hi = phys.H0 + tr.zeta_i[j];
        Vec2 n = tr.nphi[j]; // N^phi weighting includes the arc stretch
        Vec2 Fe = phys.rho * (phys.g * tr.zeta[j] + 0.5 * tr.v[j].norm2()) * (h * tr.v[j]);
        double pi = have_p ? p(ring, j) : phys.p_atm;
        Vec2 Fi = (pi - phys.p_atm +
                   phys.rho * (phys.g * tr.zeta_i[j] + 0.5 * tr.v_i[j].norm2())) *
                  (hi * tr.v_i[j]);
        double ee = 0.5 * phys.rho *
                    (h * tr.v[j].norm2() + phys.g * tr.zeta[j] * tr.zeta[j]);
        double ei = 0.5 * phys.rho *
                    (hi * tr.v_i[j].norm2() + phys.g * tr.zeta_i[j] * tr.zeta_i[j]);
        double gap = (Fe - Fi).dot(n) - (ee - ei) * tr.dphi_dt[j].dot(n);
        worst = std::max(worst, std::abs(gap));
    }
    return worst;
}

DiagnosticsRecord DiagnosticsEngine::compute(const SystemState& state, const StageEval& eval,
                                             double dt) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass = total_mass(eval);
    rec.energy = total_energy(eval);
    auto ev = enstrophy_and_vorticity(eval);
    rec.enstrophy = ev[0];
    rec.irrot_max = ev[1];
    rec.subcrit_min = eval.subcrit_min;
    rec.transv_min = eval.transv_min;
    rec.gamma_min = *std::min_element(state.line.gamma.begin(), state.line.gamma.end());
    rec.gamma_max = *std::max_element(state.line.gamma.begin(), state.line.gamma.end());
    rec.char_energy = characteristic_energy(eval);

    // Running boundary-trace integral of zeta-check(1,0,0) = -div^phi(hv).
    if (dt > 0.0) {
        const double ds = stepper_->disc().curve.ds();
        double val = 0.0;
        for (double q : eval.trace.div_hv) val += q * q;
        trace_accum_ += dt * val * ds;
    }
    rec.trace_int = trace_accum_;

    rec.E1 = em_monitor(eval, 1, dt);
    rec.E2 = em_monitor(eval, 2, dt);
    rec.rellich_res = rellich_residual(eval);
    rec.flux_gap = flux_gap(eval, dt);

    // roll history
    prev_tend_ = eval.tend;
    prev_dphi_dt_ = eval.d_ext->dphi_dt;
    prev_vi_ = eval.interior->v;
    prev_interior_ = *eval.interior;
    prev_interior_->t = state.t;
    prev_t_ = state.t;
    return rec;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) {
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw SimError(ErrorCode::SolveFailed, "cannot open diagnostics CSV: " + path);
    std::fprintf(f_, "%s\n", DiagnosticsRecord::csv_header());
}

DiagnosticsWriter::~DiagnosticsWriter() {
    if (f_) std::fclose(f_);
}

void DiagnosticsWriter::write(const DiagnosticsRecord& rec) {
    std::fprintf(f_, "%s\n", rec.csv_row().c_str());
}

void DiagnosticsWriter::flush() { std::fflush(f_); }

} // namespace foswe
