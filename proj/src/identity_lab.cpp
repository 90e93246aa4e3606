#include "foswe/identity_lab.hpp"

#include <cmath>
#include <random>

namespace foswe {

namespace {

double unit_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53; // [0,1), stdlib-independent
}

struct JetVec {
    Jet x, y;

    JetVec operator+(const JetVec& o) const { return {x + o.x, y + o.y}; }
    JetVec operator-(const JetVec& o) const { return {x - o.x, y - o.y}; }
    JetVec perp() const { return {-y, x}; }
    Jet dot(const JetVec& o) const { return x * o.x + y * o.y; }
    JetVec scale(const Jet& a) const { return {a * x, a * y}; }
};

inline JetVec operator*(const Jet& a, const JetVec& v) { return {a * v.x, a * v.y}; }

struct JetMat {
    Jet a11, a12, a21, a22;

    static JetMat identity() {
        return {Jet::constant(1), Jet::constant(0), Jet::constant(0), Jet::constant(1)};
    }
    Jet det() const { return a11 * a22 - a12 * a21; }
    JetMat adjugate() const { return {a22, -a12, -a21, a11}; }
    JetMat inverse() const {
        Jet inv_det = Jet::constant(1) / det();
        return {a22 * inv_det, -a12 * inv_det, -a21 * inv_det, a11 * inv_det};
    }
    JetMat transpose() const { return {a11, a21, a12, a22}; }
    JetVec operator*(const JetVec& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    JetMat operator*(const JetMat& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    JetMat operator+(const JetMat& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    JetMat operator-(const JetMat& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    double max_abs_value() const {
        return std::max(std::max(std::abs(a11.v), std::abs(a12.v)),
                        std::max(std::abs(a21.v), std::abs(a22.v)));
    }
};

// Divergence of a jet vector (values of the exact derivatives).
inline double div_cart(const JetVec& f) { return f.x.dx + f.y.dy; }
inline double curl_cart(const JetVec& f) { return f.y.dx - f.x.dy; } // nabla^perp . f

// nabla^phi applied to a scalar jet: (dphi)^{-T} grad, value level.
inline Vec2 gradphi_v(const JetMat& dphi_inv_t, const Jet& f) {
    return {dphi_inv_t.a11.v * f.dx + dphi_inv_t.a12.v * f.dy,
            dphi_inv_t.a21.v * f.dx + dphi_inv_t.a22.v * f.dy};
}

// nabla^phi . F for a jet vector, value level.
inline double divphi_v(const JetMat& dphi_inv_t, const JetVec& f) {
    Vec2 g1 = gradphi_v(dphi_inv_t, f.x);
    Vec2 g2 = gradphi_v(dphi_inv_t, f.y);
    return g1.x + g2.y;
}

// (nabla^phi)^perp . F, value level.
inline double curlphi_v(const JetMat& dphi_inv_t, const JetVec& f) {
    Vec2 g1 = gradphi_v(dphi_inv_t, f.x);
    Vec2 g2 = gradphi_v(dphi_inv_t, f.y);
    return g2.x - g1.y;
}

// nabla^phi f as a *jet* vector: needs jets of (dphi)^{-1} entries and of the
// gradient of f, i.e. second derivatives.
inline JetVec gradphi_jet(const JetMat& dphi_inv_t, const Jet& fx, const Jet& fy) {
    return {dphi_inv_t.a11 * fx + dphi_inv_t.a12 * fy,
            dphi_inv_t.a21 * fx + dphi_inv_t.a22 * fy};
}

struct SampledVec {
    TrigField x, y;

    JetVec jet(double px, double py) const { return {x.jet(px, py), y.jet(px, py)}; }
    // Jet of the Jacobian matrix entries: d(component)/d(direction).
    JetMat jacobian(double px, double py) const {
        return {x.jet_dx(px, py), x.jet_dy(px, py), y.jet_dx(px, py), y.jet_dy(px, py)};
    }
};

SampledVec random_vec(std::uint64_t seed, const RandomFieldSpec& s, double amp) {
    return {TrigField::random(seed * 2 + 1, s.band, amp, s.lx, s.ly),
            TrigField::random(seed * 2 + 2, s.band, amp, s.lx, s.ly)};
}

} // namespace

TrigField TrigField::random(std::uint64_t seed, int band, double amplitude, double lx,
                            double ly) {
    std::mt19937_64 eng(seed);
    TrigField f;
    const double wx = 2.0 * kPi / lx, wy = 2.0 * kPi / ly;
    for (int kx = 0; kx <= band; ++kx) {
        for (int ky = -band; ky <= band; ++ky) {
            if (kx == 0 && ky < 0) continue;
            double u = 2.0 * unit_uniform(eng) - 1.0;
            double ph = 2.0 * kPi * unit_uniform(eng);
            double kk = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
            Mode m;
            m.kx = wx * kx;
            m.ky = wy * ky;
            m.amp = amplitude * u / (1.0 + kk * kk * kk);
            m.phase = ph;
            f.modes_.push_back(m);
        }
    }
    return f;
}

double TrigField::value(double x, double y) const { return d(x, y, 0, 0); }

double TrigField::d(double x, double y, int ox, int oy) const {
    double acc = 0.0;
    const double shift = 0.5 * kPi * static_cast<double>(ox + oy);
    for (const Mode& m : modes_) {
        double fac = 1.0;
        for (int p = 0; p < ox; ++p) fac *= m.kx;
        for (int p = 0; p < oy; ++p) fac *= m.ky;
        acc += m.amp * fac * std::cos(m.kx * x + m.ky * y + m.phase + shift);
    }
    return acc;
}

std::map<std::string, double> check_vector_identities(const RandomFieldSpec& spec) {
    SampledVec F = random_vec(spec.seed * 101 + 1, spec, spec.amplitude);
    SampledVec G = random_vec(spec.seed * 101 + 2, spec, spec.amplitude);
    SampledVec V = random_vec(spec.seed * 101 + 3, spec, spec.amplitude);
    SampledVec Q = random_vec(spec.seed * 101 + 4, spec, spec.amplitude);
    SampledVec Psi = random_vec(spec.seed * 101 + 5, spec, spec.amplitude);
    SampledVec PhiT = random_vec(spec.seed * 101 + 6, spec, spec.phi_amplitude);

    std::map<std::string, double> res;
    for (auto& kv : {"F1", "F2", "F3a", "F3b", "F4a", "F4b", "F4c"}) res[kv] = 0.0;

    for (int i = 0; i < spec.samples; ++i) {
        for (int j = 0; j < spec.samples; ++j) {
            double px = spec.lx * (i + 0.31) / spec.samples;
            double py = spec.ly * (j + 0.57) / spec.samples;

            JetVec f = F.jet(px, py), g = G.jet(px, py), v = V.jet(px, py);
            JetVec q = Q.jet(px, py), psi = Psi.jet(px, py);
            JetMat dv{V.x.jet_dx(px, py), V.x.jet_dy(px, py),
                      V.y.jet_dx(px, py), V.y.jet_dy(px, py)};

            // F1: F.(G.grad)V = G.(F.grad)V + (F.G^perp) nabla^perp.V (Cartesian).
            {
                Vec2 fv{f.x.v, f.y.v}, gv{g.x.v, g.y.v};
                Vec2 ggradV{dv.a11.v * gv.x + dv.a12.v * gv.y,
                            dv.a21.v * gv.x + dv.a22.v * gv.y};
                Vec2 fgradV{dv.a11.v * fv.x + dv.a12.v * fv.y,
                            dv.a21.v * fv.x + dv.a22.v * fv.y};
                double lhs = fv.dot(ggradV);
                double rhs = gv.dot(fgradV) + fv.dot(gv.perp()) * (dv.a21.v - dv.a12.v);
                res["F1"] = std::max(res["F1"], std::abs(lhs - rhs));
            }

            // Diffeomorphism phi = id + phi~ and its pulled-back gradient.
            JetMat dphi = JetMat::identity() + PhiT.jacobian(px, py);
            JetMat dphi_inv = dphi.inverse();
            JetMat dphi_inv_t = dphi_inv.transpose();
            Jet J = dphi.det();

            // grad^phi of the components of v, f, g, q as value-level vectors.
            auto gphi = [&](const Jet& jx, const Jet& jy) {
                return gradphi_jet(dphi_inv_t, jx, jy);
            };
            JetVec gp_v1 = gphi(V.x.jet_dx(px, py), V.x.jet_dy(px, py));
            JetVec gp_v2 = gphi(V.y.jet_dx(px, py), V.y.jet_dy(px, py));

            // F2: f.(g.grad^phi)v = g.(f.grad^phi)v + (f.g^perp)(grad^phi)^perp.v
            {
                Vec2 fv{f.x.v, f.y.v}, gv{g.x.v, g.y.v};
                Vec2 ggradv{gp_v1.x.v * gv.x + gp_v1.y.v * gv.y,
                            gp_v2.x.v * gv.x + gp_v2.y.v * gv.y};
                Vec2 fgradv{gp_v1.x.v * fv.x + gp_v1.y.v * fv.y,
                            gp_v2.x.v * fv.x + gp_v2.y.v * fv.y};
                double curl = gp_v2.x.v - gp_v1.y.v;
                double lhs = fv.dot(ggradv);
                double rhs = gv.dot(fgradv) + fv.dot(gv.perp()) * curl;
                res["F2"] = std::max(res["F2"], std::abs(lhs - rhs));
            }

            // F3a: grad^phi(f.g) = (d^phi f)^T g + (d^phi g)^T f
            {
                Jet fg = f.dot(g);
                Vec2 lhs = gradphi_v(dphi_inv_t, fg);
                JetVec gp_f1 = gphi(F.x.jet_dx(px, py), F.x.jet_dy(px, py));
                JetVec gp_f2 = gphi(F.y.jet_dx(px, py), F.y.jet_dy(px, py));
                JetVec gp_g1 = gphi(G.x.jet_dx(px, py), G.x.jet_dy(px, py));
                JetVec gp_g2 = gphi(G.y.jet_dx(px, py), G.y.jet_dy(px, py));
                // (d^phi f)^T g: component j = sum_k d_j^phi f_k g_k
                Vec2 t1{gp_f1.x.v * g.x.v + gp_f2.x.v * g.y.v,
                        gp_f1.y.v * g.x.v + gp_f2.y.v * g.y.v};
                Vec2 t2{gp_g1.x.v * f.x.v + gp_g2.x.v * f.y.v,
                        gp_g1.y.v * f.x.v + gp_g2.y.v * f.y.v};
                res["F3a"] = std::max(res["F3a"],
                                      std::max(std::abs(lhs.x - t1.x - t2.x),
                                               std::abs(lhs.y - t1.y - t2.y)));

                // F3b: (d^phi f)^T g = (g.grad^phi) f - ((grad^phi)^perp.f) g^perp
                double curlf = gp_f2.x.v - gp_f1.y.v;
                Vec2 ggradf{gp_f1.x.v * g.x.v + gp_f1.y.v * g.y.v,
                            gp_f2.x.v * g.x.v + gp_f2.y.v * g.y.v};
                Vec2 gperp{-g.y.v, g.x.v};
                Vec2 rhs{ggradf.x - curlf * gperp.x, ggradf.y - curlf * gperp.y};
                res["F3b"] = std::max(res["F3b"],
                                      std::max(std::abs(t1.x - rhs.x), std::abs(t1.y - rhs.y)));
            }

            // F4 family with the adjugate A* = det(A) A^{-1}.
            {
                JetMat dpsi{Psi.x.jet_dx(px, py), Psi.x.jet_dy(px, py),
                            Psi.y.jet_dx(px, py), Psi.y.jet_dy(px, py)};
                JetMat dpsi_star = dpsi.adjugate();
                JetMat dphi_star = dphi.adjugate();
                // F4a: (dphi*)^{-1} (dpsi*) = (1/J)(dphi)(dpsi*) = (d^phi psi)*
                JetMat m1 = dphi_star.inverse() * dpsi_star;
                JetMat m2 = (dphi * dpsi_star);
                m2 = {m2.a11 / J, m2.a12 / J, m2.a21 / J, m2.a22 / J};
                JetMat dphipsi = dpsi * dphi_inv;
                JetMat m3 = dphipsi.adjugate();
                double r1 = (m1 - m2).max_abs_value();
                double r2 = (m2 - m3).max_abs_value();
                res["F4a"] = std::max(res["F4a"], std::max(r1, r2));

                // F4b: div((dpsi*) q) = J grad^phi . ((d^phi psi)* q)
                JetVec lhs_field{dpsi_star.a11 * q.x + dpsi_star.a12 * q.y,
                                 dpsi_star.a21 * q.x + dpsi_star.a22 * q.y};
                double lhs = div_cart(lhs_field);
                JetVec rhs_field = m3 * q;
                double rhs = J.v * divphi_v(dphi_inv_t, rhs_field);
                res["F4b"] = std::max(res["F4b"], std::abs(lhs - rhs));

                // F4c: grad^phi.((d^phi psi)* q) = grad^phi.((grad^phi.q) psi - (psi.grad^phi) q)
                JetVec gq1 = gphi(Q.x.jet_dx(px, py), Q.x.jet_dy(px, py));
                JetVec gq2 = gphi(Q.y.jet_dx(px, py), Q.y.jet_dy(px, py));
                Jet divq = gq1.x + gq2.y;
                JetVec w{divq * psi.x - (psi.x * gq1.x + psi.y * gq1.y),
                         divq * psi.y - (psi.x * gq2.x + psi.y * gq2.y)};
                double lhs2 = divphi_v(dphi_inv_t, rhs_field);
                double rhs2 = divphi_v(dphi_inv_t, w);
                res["F4c"] = std::max(res["F4c"], std::abs(lhs2 - rhs2));
            }
        }
    }
    return res;
}

std::map<std::string, double> check_linearization_rules(const RandomFieldSpec& spec) {
    // One-parameter family phi_tau = id + phi0~ + tau phi1~, f_tau = f0 + tau f1,
    // with synthetic time dependence for the d_t rule.
    SampledVec Phi0 = random_vec(spec.seed * 77 + 1, spec, spec.phi_amplitude);
    SampledVec Phi1 = random_vec(spec.seed * 77 + 2, spec, spec.phi_amplitude);
    SampledVec PhiT = random_vec(spec.seed * 77 + 3, spec, spec.phi_amplitude);
    TrigField F0 = TrigField::random(spec.seed * 77 + 4, spec.band, spec.amplitude, spec.lx, spec.ly);
    TrigField F1 = TrigField::random(spec.seed * 77 + 5, spec.band, spec.amplitude, spec.lx, spec.ly);
    TrigField Ft0 = TrigField::random(spec.seed * 77 + 6, spec.band, spec.amplitude, spec.lx, spec.ly);
    TrigField Ft1 = TrigField::random(spec.seed * 77 + 7, spec.band, spec.amplitude, spec.lx, spec.ly);
    SampledVec G0 = random_vec(spec.seed * 77 + 8, spec, spec.amplitude);
    SampledVec G1 = random_vec(spec.seed * 77 + 9, spec, spec.amplitude);

    std::map<std::string, double> res;
    for (auto& kv : {"lin-grad", "lin-div", "lin-dt", "gu-grad", "gu-const"}) res[kv] = 0.0;

    for (int i = 0; i < spec.samples; ++i) {
        for (int j = 0; j < spec.samples; ++j) {
            double px = spec.lx * (i + 0.41) / spec.samples;
            double py = spec.ly * (j + 0.23) / spec.samples;

            JetMat dphi = JetMat::identity() + Phi0.jacobian(px, py);
            JetMat dphi_inv = dphi.inverse();
            JetMat dphi_inv_t = dphi_inv.transpose();
            JetMat dphidot = Phi1.jacobian(px, py);
            JetVec phidot = Phi1.jet(px, py);

            Jet f0 = F0.jet(px, py), f1 = F1.jet(px, py);
            JetVec gradf0{F0.jet_dx(px, py), F0.jet_dy(px, py)};
            JetVec gradf1{F1.jet_dx(px, py), F1.jet_dy(px, py)};

            // d/dtau of (dphi_tau)^{-T} grad f_tau at tau = 0.
            JetMat dinv_dot_t =
                (dphi_inv * dphidot * dphi_inv).transpose(); // -d/dtau of inverse, transposed
            JetVec gphi_f0 = dphi_inv_t * gradf0;
            JetVec lhs = (dphi_inv_t * gradf1) - (dinv_dot_t * gradf0);

            // Rule: grad^phi f1 - (d^phi phidot)^T grad^phi f0.
            JetMat dphiphidot = dphidot * dphi_inv; // d^phi phidot
            JetVec rhs = (dphi_inv_t * gradf1) - (dphiphidot.transpose() * gphi_f0);
            res["lin-grad"] = std::max(res["lin-grad"],
                                       std::max(std::abs(lhs.x.v - rhs.x.v),
                                                std::abs(lhs.y.v - rhs.y.v)));

            // lin-div with vector field g.
            {
                JetMat dg0 = G0.jacobian(px, py);
                JetMat dg1 = G1.jacobian(px, py);
                // row-wise grad of components: grad g0_k as JetVec
                JetVec gg0x{dg0.a11, dg0.a12}, gg0y{dg0.a21, dg0.a22};
                JetVec gg1x{dg1.a11, dg1.a12}, gg1y{dg1.a21, dg1.a22};
                JetVec gp0x = dphi_inv_t * gg0x, gp0y = dphi_inv_t * gg0y;
                JetVec gp1x = dphi_inv_t * gg1x, gp1y = dphi_inv_t * gg1y;
                JetVec l0x = dinv_dot_t * gg0x, l0y = dinv_dot_t * gg0y;
                double lhs_div = (gp1x.x.v - l0x.x.v) + (gp1y.y.v - l0y.y.v);
                // ((d^phi phidot)^T grad^phi) . g = sum_{ij} d_j^phi phidot_i d_i^phi g_j
                double corr = dphiphidot.a11.v * gp0x.x.v + dphiphidot.a21.v * gp0x.y.v +
                              dphiphidot.a12.v * gp0y.x.v + dphiphidot.a22.v * gp0y.y.v;
                double rhs_div = (gp1x.x.v + gp1y.y.v) - corr;
                res["lin-div"] = std::max(res["lin-div"], std::abs(lhs_div - rhs_div));
            }

            // lin-dt: (d_t^phi f). = d_t^phi fdot - (d_t^phi phidot).grad^phi f
            // with d_t phi = PhiT (tau-independent), d_t f_tau = Ft0 + tau Ft1.
            {
                JetVec dtphi = PhiT.jet(px, py);
                Jet ft0 = Ft0.jet(px, py), ft1 = Ft1.jet(px, py);
                JetVec gphi_f1 = dphi_inv_t * gradf1;
                // LHS: d/dtau [ ft_tau - dtphi . (dphi_tau)^{-T} grad f_tau ]
                double lhs_dt = ft1.v - (dtphi.x.v * (gphi_f1.x.v - (dinv_dot_t * gradf0).x.v) +
                                         dtphi.y.v * (gphi_f1.y.v - (dinv_dot_t * gradf0).y.v));
                // RHS: d_t^phi fdot - (d_t^phi phidot) . grad^phi f
                // fdot = f1 (no explicit t-dependence of the variation itself),
                // d_t fdot = ft1; d_t phidot = 0 here, so d_t^phi phidot =
                // -(dtphi . grad^phi) phidot.
                JetMat dphidot_cart = dphidot; // Cartesian Jacobian of phidot
                JetVec gp_pdx = dphi_inv_t * JetVec{dphidot_cart.a11, dphidot_cart.a12};
                JetVec gp_pdy = dphi_inv_t * JetVec{dphidot_cart.a21, dphidot_cart.a22};
                Vec2 dtphidot{-(dtphi.x.v * gp_pdx.x.v + dtphi.y.v * gp_pdx.y.v),
                              -(dtphi.x.v * gp_pdy.x.v + dtphi.y.v * gp_pdy.y.v)};
                double dt_fdot =
                    ft1.v - (dtphi.x.v * gphi_f1.x.v + dtphi.y.v * gphi_f1.y.v);
                double rhs_dt = dt_fdot - (dtphidot.x * gphi_f0.x.v + dtphidot.y * gphi_f0.y.v);
                res["lin-dt"] = std::max(res["lin-dt"], std::abs(lhs_dt - rhs_dt));
            }

            // gu-grad: (grad^phi f)^check = grad^phi (f-check).
            {
                // f-check = f1 - phidot . grad^phi f0 (as a jet).
                JetVec gphi_f0_jet = dphi_inv_t * gradf0;
                Jet fcheck = f1 - (phidot.x * gphi_f0_jet.x + phidot.y * gphi_f0_jet.y);
                Vec2 rhs_gu = gradphi_v(dphi_inv_t, fcheck);
                // LHS: g-dot - (phidot . grad^phi) g with g = grad^phi f0.
                JetVec gdot = lhs; // from lin-grad evaluation above
                Vec2 adv{phidot.x.v * gradphi_v(dphi_inv_t, gphi_f0_jet.x).x +
                             phidot.y.v * gradphi_v(dphi_inv_t, gphi_f0_jet.x).y,
                         phidot.x.v * gradphi_v(dphi_inv_t, gphi_f0_jet.y).x +
                             phidot.y.v * gradphi_v(dphi_inv_t, gphi_f0_jet.y).y};
                Vec2 lhs_gu{gdot.x.v - adv.x, gdot.y.v - adv.y};
                res["gu-grad"] = std::max(res["gu-grad"],
                                          std::max(std::abs(lhs_gu.x - rhs_gu.x),
                                                   std::abs(lhs_gu.y - rhs_gu.y)));
            }

            // gu-const: constant f has vanishing good unknown when fdot = 0.
            {
                Jet fc = Jet::constant(3.25);
                Vec2 g = gradphi_v(dphi_inv_t, fc);
                double fcheck = 0.0 - (phidot.x.v * g.x + phidot.y.v * g.y);
                res["gu-const"] = std::max(res["gu-const"], std::abs(fcheck));
            }
        }
    }
    return res;
}

double check_rellich_identity(const RandomFieldSpec& spec) {
    SampledVec F = random_vec(spec.seed * 303 + 1, spec, spec.amplitude);
    SampledVec Q = random_vec(spec.seed * 303 + 2, spec, spec.amplitude);
    SampledVec PhiT = random_vec(spec.seed * 303 + 3, spec, spec.phi_amplitude);

    double worst = 0.0;
    for (int i = 0; i < spec.samples; ++i) {
        for (int j = 0; j < spec.samples; ++j) {
            double px = spec.lx * (i + 0.19) / spec.samples;
            double py = spec.ly * (j + 0.83) / spec.samples;

            JetMat dphi = JetMat::identity() + PhiT.jacobian(px, py);
            JetMat dphi_inv_t = dphi.inverse().transpose();

            JetVec f = F.jet(px, py), q = Q.jet(px, py);
            JetVec fperp = f.perp(), qperp = q.perp();
            Jet fq = f.dot(q), fpq = fperp.dot(q);

            // LHS: grad^phi . { (fq^2 - fpq^2) f + 2 fq fpq f^perp }
            JetVec inner = (fq * fq - fpq * fpq) * f + (Jet::constant(2) * fq * fpq) * fperp;
            double lhs = divphi_v(dphi_inv_t, inner);

            // RHS per the identity.
            JetVec gf1 = gradphi_jet(dphi_inv_t, F.x.jet_dx(px, py), F.x.jet_dy(px, py));
            JetVec gf2 = gradphi_jet(dphi_inv_t, F.y.jet_dx(px, py), F.y.jet_dy(px, py));
            JetVec gq1 = gradphi_jet(dphi_inv_t, Q.x.jet_dx(px, py), Q.x.jet_dy(px, py));
            JetVec gq2 = gradphi_jet(dphi_inv_t, Q.y.jet_dx(px, py), Q.y.jet_dy(px, py));
            double divf = gf1.x.v + gf2.y.v;
            double divfperp = -gf2.x.v + gf1.y.v; // grad^phi . f^perp
            double divq = gq1.x.v + gq2.y.v;
            double curlq = gq2.x.v - gq1.y.v;

            // (q.grad^phi)f + (q^perp.grad^phi)f^perp, dotted with q.
            Vec2 qv{q.x.v, q.y.v}, qp{qperp.x.v, qperp.y.v};
            Vec2 t1{gf1.x.v * qv.x + gf1.y.v * qv.y, gf2.x.v * qv.x + gf2.y.v * qv.y};
            // f^perp = (-f2, f1): rows of its gradient are (-gf2, gf1).
            Vec2 t2{-(gf2.x.v * qp.x + gf2.y.v * qp.y), gf1.x.v * qp.x + gf1.y.v * qp.y};
            double braces = (t1.x + t2.x) * qv.x + (t1.y + t2.y) * qv.y +
                            fq.v * divq - fpq.v * curlq;
            double f2 = f.x.v * f.x.v + f.y.v * f.y.v;
            double rhs = divf * (fq.v * fq.v - fpq.v * fpq.v) +
                         2.0 * divfperp * fq.v * fpq.v + 2.0 * f2 * braces;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double check_divergence_theorem(std::uint64_t seed, size_t nr, size_t ns) {
    ReferenceCurve curve = make_circle_curve(1.0, ns);
    NTGrid grid(curve, RadialGrid::uniform(0.0, 1.5, nr), 3);
    HanzawaParams params;
    params.eps = 0.08;
    ContactLine line = ContactLine::zero(ns);
    std::mt19937_64 eng(seed);
    auto coef = [&](double amp) { return amp * (2.0 * unit_uniform(eng) - 1.0); };
    for (int k = 1; k <= 4; ++k) {
        double a = coef(0.05) / (1.0 + k * k * k);
        double ph = 2.0 * kPi * unit_uniform(eng);
        for (size_t j = 0; j < ns; ++j)
            line.gamma[j] += a * std::cos(2.0 * kPi * k * curve.s_node(j) / curve.length + ph);
    }
    DiffeoField d = build_diffeo(grid, line, params);

    // f = radial bump (=1 at the ring, 0 beyond the tube) times band-limited
    // trig components in s
    TrigField fx = TrigField::random(seed * 5 + 1, 5, 1.0, curve.length, 1.0);
    TrigField fy = TrigField::random(seed * 5 + 2, 5, 1.0, curve.length, 1.0);
    VecField f(nr + 1, ns);
    for (size_t i = 0; i <= nr; ++i) {
        double r = grid.r_node(i);
        // mild radial modulation: the smooth envelope is flat at the ring, so
        // the discrete telescoping constant stays small while the mismatch is
        // still resolvable above rounding for the convergence check
        double cut = params.chi(r / curve.tube_halfwidth) * (1.0 + 0.003 * std::cos(3.0 * r));
        for (size_t j = 0; j < ns; ++j) {
            double s = grid.s_node(j);
            f.set(i, j, Vec2{cut * fx.value(s, 0.0), cut * fy.value(s, 0.0)});
        }
    }
    Field div(nr + 1, ns);
    d.divphi(f, div);
    double lhs = d.integrate_J(div);
    double rhs = 0.0;
    const double ds = curve.ds();
    for (size_t j = 0; j < ns; ++j) rhs -= d.Nphi.at(0, j).dot(f.at(0, j)) * ds;
    double scale = 0.0;
    for (size_t j = 0; j < ns; ++j) scale += std::abs(d.Nphi.at(0, j).dot(f.at(0, j))) * ds;
    return std::abs(lhs - rhs) / std::max(scale, 1e-30);
}

} // namespace foswe
