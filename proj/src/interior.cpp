#include "foswe/interior.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>

namespace foswe {

namespace {

// Symmetric banded matrix with lower bandwidth `bw`, stored by diagonals:
// band[d][i] = A(i+d, i) for d = 0..bw.  LDL^T factorization in place.
struct BandedSPD {
    size_t n = 0;
    int bw = 0;
    std::vector<std::vector<double>> band;

    void init(size_t n_, int bw_) {
        n = n_;
        bw = bw_;
        band.assign(bw + 1, std::vector<double>(n, 0.0));
    }
    void add(size_t i, size_t j, double v) {
        if (i >= j) band[i - j][j] += v; // upper triangle implied by symmetry
    }

    bool factor() {
        for (size_t j = 0; j < n; ++j) {
            double d = band[0][j];
            for (int k = 1; k <= bw; ++k)
                if (j >= static_cast<size_t>(k)) {
                    double l = band[k][j - k];
                    d -= l * l * band[0][j - k];
                }
            if (d <= 0.0) return false;
            band[0][j] = d;
            int imax = static_cast<int>(std::min<size_t>(bw, n - 1 - j));
            for (int i = 1; i <= imax; ++i) {
                double s = band[i][j];
                for (int k = 1; k <= bw; ++k)
                    if (j >= static_cast<size_t>(k) && i + k <= bw)
                        s -= band[i + k][j - k] * band[k][j - k] * band[0][j - k];
                band[i][j] = s / d;
            }
        }
        return true;
    }

    void solve(double* b) const {
        for (size_t j = 0; j < n; ++j) {
            double xj = b[j];
            int imax = static_cast<int>(std::min<size_t>(bw, n - 1 - j));
            for (int i = 1; i <= imax; ++i) b[j + i] -= band[i][j] * xj;
        }
        for (size_t j = 0; j < n; ++j) b[j] /= band[0][j];
        for (size_t jj = n; jj-- > 0;) {
            double s = b[jj];
            int imax = static_cast<int>(std::min<size_t>(bw, n - 1 - jj));
            for (int i = 1; i <= imax; ++i) s -= band[i][jj] * b[jj + i];
            b[jj] = s;
        }
    }
};

} // namespace

struct EllipticOperator::ModeSolver {
    BandedSPD mat;
    bool with_pole = false; // k = 0 carries the pole unknown at index 0
};

EllipticOperator::EllipticOperator(const NTGrid& grid, const DiffeoField& diffeo,
                                   const ObstacleSpec& obs)
    : grid_(&grid),
      nr_(grid.nr()),
      ns_(grid.ns()),
      k11_(nr_, ns_),
      k12_(nr_, ns_),
      k22_(nr_, ns_),
      hw_(nr_, ns_),
      wquad_(grid.quad_weight()),
      dtheta_snapshot_(nr_, ns_) {
    const ReferenceCurve& curve = grid.curve();
    if (!curve.is_circle())
        throw SimError(ErrorCode::InvalidArgument, "interior solver requires the circle chart");
    const double R0 = curve.circle_radius;
    double min_eig = 1e300;
    for (size_t i = 0; i < nr_; ++i) {
        for (size_t j = 0; j < ns_; ++j) {
            double rho = R0 + diffeo.R(i, j); // physical radius of the moved node
            double hw = obs.hw_radial(rho);
            hw_(i, j) = hw;
            Mat2 B = diffeo.dtheta_inv.at(i, j);
            Mat2 G = B * B.transpose();
            double c = hw * diffeo.chart_det(i, j);
            Mat2 K = G * c;
            k11_(i, j) = K.a11;
            k12_(i, j) = K.a12;
            k22_(i, j) = K.a22;
            double tr = K.a11 + K.a22, det = K.det();
            double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
            min_eig = std::min(min_eig, 0.5 * (tr - disc));
            dtheta_snapshot_.set(i, j, diffeo.dtheta.at(i, j));
        }
    }
    min_eig_ = min_eig;
    if (min_eig <= 0.0)
        throw SimError(ErrorCode::JacobianDegenerate,
                       "elliptic coefficients degenerate: min eigenvalue <= 0");
    // Pole patch: cone energy over the chart-center disk (phi = id there).
    pole_coef_ = obs.hw_radial(0.0) * curve.ds() / (2.0 * R0);
    build_preconditioner();
}

// Bilinear form (staggered radial fluxes, spectral arc):
//   a(u,w) = sum_m d_m [ K11_m (Gu)(Gw) + K12_m ((Gu)(M Dsw) + (M Dsu)(Gw)) ]*ds
//          + sum_i  w_i K22_i (Dsu)(Dsw)
//          + pole cone
// where G is the two-point node->midpoint gradient and M the node->midpoint
// average.  Compact radial stencils keep second-order consistency up to the
// ring, and the form stays exactly symmetric.
void EllipticOperator::apply(const Field& u, double u_pole, Field& out, double& out_pole) const {
    const NTGrid& g = *grid_;
    const auto& rnode = g.radial().node;
    const double ds = g.curve().ds();
    Field dsu(nr_, ns_);
    g.d_s(u, dsu);

    out.fill(0.0);
    // midpoint loop: flux contributions into the two adjacent node rows
    Field scross(nr_, ns_, 0.0); // collects  sum_m M^T(d K12 Gu)  per node
    for (size_t m = 0; m + 1 < nr_; ++m) {
        const double d = rnode[m + 1] - rnode[m];
        const double* u0 = u.row(m);
        const double* u1 = u.row(m + 1);
        const double* s0 = dsu.row(m);
        const double* s1 = dsu.row(m + 1);
        double* o0 = out.row(m);
        double* o1 = out.row(m + 1);
        double* c0 = scross.row(m);
        double* c1 = scross.row(m + 1);
        for (size_t j = 0; j < ns_; ++j) {
            double K11m = 0.5 * (k11_(m, j) + k11_(m + 1, j));
            double K12m = 0.5 * (k12_(m, j) + k12_(m + 1, j));
            double gu = (u1[j] - u0[j]) / d;
            double msu = 0.5 * (s0[j] + s1[j]);
            double flux_r = (K11m * gu + K12m * msu) * d * ds;
            // G^T: +1 at node m+1, -1 at node m, each divided by d
            o1[j] += flux_r / d;
            o0[j] -= flux_r / d;
            // s-cross: d K12 Gu at midpoint, averaged back to nodes (M^T)
            double cr = 0.5 * K12m * gu * d * ds;
            c0[j] += cr;
            c1[j] += cr;
        }
    }
    // K22 nodal term + cross term: out += Ds^T( w K22 Dsu + scross )
    Field stmp(nr_, ns_);
    for (size_t i = 0; i < nr_; ++i)
        for (size_t j = 0; j < ns_; ++j)
            stmp(i, j) = wquad_(i, j) * k22_(i, j) * dsu(i, j) + scross(i, j);
    Field dsT(nr_, ns_);
    g.d_s(stmp, dsT); // spectral derivative is skew-adjoint: Ds^T = -Ds
    for (size_t i = 0; i < nr_; ++i)
        for (size_t j = 0; j < ns_; ++j) out(i, j) -= dsT(i, j);

    out_pole = 0.0;
    for (size_t j = 0; j < ns_; ++j) {
        double t = pole_coef_ * (u(0, j) - u_pole);
        out(0, j) += t;
        out_pole -= t;
    }
}

void EllipticOperator::build_preconditioner() {
    const Spectral& sp = grid_->spectral();
    const auto& rnode = grid_->radial().node;
    const double ds = grid_->curve().ds();
    const size_t nm = sp.nmodes();
    const size_t ni = nr_ - 1; // interior radial nodes (ring removed)

    // Arc averages of the coefficients and weights.
    std::vector<double> K11m(nr_), K22m(nr_), Wm(nr_);
    for (size_t i = 0; i < nr_; ++i) {
        double a = 0.0, b = 0.0, w = 0.0;
        for (size_t j = 0; j < ns_; ++j) {
            a += k11_(i, j);
            b += k22_(i, j);
            w += wquad_(i, j);
        }
        K11m[i] = a / static_cast<double>(ns_);
        K22m[i] = b / static_cast<double>(ns_);
        Wm[i] = w / static_cast<double>(ns_);
    }

    auto modes = std::make_shared<std::vector<ModeSolver>>(nm);
    for (size_t k = 0; k < nm; ++k) {
        ModeSolver& ms = (*modes)[k];
        ms.with_pole = (k == 0);
        const size_t shift = ms.with_pole ? 1 : 0;
        const size_t n = ni + shift;
        ms.mat.init(n, 1);
        double w2 = sp.omega(k) * sp.omega(k);
        for (size_t m = 0; m + 1 < nr_; ++m) {
            double d = rnode[m + 1] - rnode[m];
            double c = 0.5 * (K11m[m] + K11m[m + 1]) * ds / d;
            size_t i0 = m + shift, i1 = m + 1 + shift;
            if (m < ni) ms.mat.add(i0, i0, c);
            if (m + 1 < ni) ms.mat.add(i1, i1, c);
            if (m + 1 < ni) ms.mat.add(i1, i0, -c);
        }
        for (size_t i = 0; i < ni; ++i)
            ms.mat.add(i + shift, i + shift, w2 * Wm[i] * K22m[i]);
        if (ms.with_pole) {
            ms.mat.add(1, 1, pole_coef_);
            ms.mat.add(1, 0, -pole_coef_);
            ms.mat.add(0, 0, pole_coef_);
        } else {
            ms.mat.add(0, 0, pole_coef_);
        }
        if (!ms.mat.factor())
            throw SimError(ErrorCode::SolveFailed, "preconditioner factorization failed");
    }
    modes_ = std::move(modes);
}

void EllipticOperator::precondition(const Field& r, double r_pole, Field& z,
                                    double& z_pole) const {
    const Spectral& sp = grid_->spectral();
    const size_t nm = sp.nmodes();
    const size_t ni = nr_ - 1;
    std::vector<std::complex<double>> spec(ni * nm);
    std::vector<std::complex<double>> row(nm);
    for (size_t i = 0; i < ni; ++i) {
        sp.analyze(r.row(i), row.data());
        for (size_t k = 0; k < nm; ++k) spec[k * ni + i] = row[k];
    }
    {
        std::vector<double> b(ni + 1);
        b[0] = r_pole / static_cast<double>(ns_);
        for (size_t i = 0; i < ni; ++i) b[i + 1] = spec[i].real();
        (*modes_)[0].mat.solve(b.data());
        z_pole = b[0];
        for (size_t i = 0; i < ni; ++i) spec[i] = b[i + 1];
    }
    std::vector<double> re(ni), im(ni);
    for (size_t k = 1; k < nm; ++k) {
        for (size_t i = 0; i < ni; ++i) {
            re[i] = spec[k * ni + i].real();
            im[i] = spec[k * ni + i].imag();
        }
        (*modes_)[k].mat.solve(re.data());
        (*modes_)[k].mat.solve(im.data());
        for (size_t i = 0; i < ni; ++i) spec[k * ni + i] = {re[i], im[i]};
    }
    for (size_t i = 0; i < ni; ++i) {
        for (size_t k = 0; k < nm; ++k) row[k] = spec[k * ni + i];
        sp.synthesize(row.data(), z.row(i));
    }
    for (size_t j = 0; j < ns_; ++j) z(nr_ - 1, j) = 0.0;
}

double EllipticOperator::drift_since_factorization(const DiffeoField& diffeo) const {
    double num = 0.0, den = 1e-300;
    for (size_t i = 0; i < nr_; ++i)
        for (size_t j = 0; j < ns_; ++j) {
            Mat2 d = diffeo.dtheta.at(i, j) - dtheta_snapshot_.at(i, j);
            num = std::max(num, d.max_abs());
            den = std::max(den, dtheta_snapshot_.at(i, j).max_abs());
        }
    return num / den;
}

void EllipticOperator::solve(const std::vector<double>& psi, Field& u, double& u_pole,
                             const Field* source, bool warm) const {
    const size_t ring = nr_ - 1;
    if (psi.size() != ns_)
        throw SimError(ErrorCode::InvalidArgument, "Dirichlet data size mismatch");
    // Subtract the mean of psi so constant data short-circuits to the exact
    // constant solution (keeps discrete equilibria bit-exact).
    double psi_mean = 0.0;
    for (double p : psi) psi_mean += p;
    psi_mean /= static_cast<double>(ns_);

    if (!warm || u.nr() != nr_) {
        u = Field(nr_, ns_, 0.0);
        u_pole = 0.0;
    } else {
        for (auto& v : u.raw()) v -= psi_mean;
        u_pole -= psi_mean;
    }
    for (size_t j = 0; j < ns_; ++j) u(ring, j) = psi[j] - psi_mean;

    Field Au(nr_, ns_);
    double Au_pole;
    apply(u, u_pole, Au, Au_pole);
    Field rsd(nr_, ns_, 0.0);
    double rsd_pole = -Au_pole;
    for (size_t i = 0; i < ring; ++i)
        for (size_t j = 0; j < ns_; ++j) rsd(i, j) = -Au(i, j);
    if (source) {
        for (size_t i = 0; i < ring; ++i)
            for (size_t j = 0; j < ns_; ++j)
                rsd(i, j) += (*source)(i, j) * grid_->theta_det()(i, j) * wquad_(i, j);
    }

    auto dot = [&](const Field& a, double ap, const Field& b, double bp) {
        double s = 0.0;
        for (size_t i = 0; i < ring; ++i) {
            const double* ra = a.row(i);
            const double* rb = b.row(i);
            for (size_t j = 0; j < ns_; ++j) s += ra[j] * rb[j];
        }
        return s + ap * bp;
    };

    double b_norm = std::sqrt(dot(rsd, rsd_pole, rsd, rsd_pole));
    const double tol = 1e-13;
    last_iters_ = 0;
    last_residual_ = b_norm;
    if (b_norm == 0.0) {
        for (auto& v : u.raw()) v += psi_mean;
        u_pole += psi_mean;
        return;
    }

    Field z(nr_, ns_), p(nr_, ns_), Ap(nr_, ns_);
    double z_pole, p_pole, Ap_pole;
    precondition(rsd, rsd_pole, z, z_pole);
    p = z;
    p_pole = z_pole;
    double rz = dot(rsd, rsd_pole, z, z_pole);
    const int max_iters = 2000;
    for (int it = 1; it <= max_iters; ++it) {
        for (size_t j = 0; j < ns_; ++j) p(ring, j) = 0.0;
        apply(p, p_pole, Ap, Ap_pole);
        double pAp = dot(p, p_pole, Ap, Ap_pole);
        if (pAp <= 0.0)
            throw SimError(ErrorCode::SolveFailed, "CG breakdown: non-positive curvature");
        double alpha = rz / pAp;
        for (size_t i = 0; i < ring; ++i)
            for (size_t j = 0; j < ns_; ++j) u(i, j) += alpha * p(i, j);
        u_pole += alpha * p_pole;
        for (size_t i = 0; i < ring; ++i)
            for (size_t j = 0; j < ns_; ++j) rsd(i, j) -= alpha * Ap(i, j);
        rsd_pole -= alpha * Ap_pole;
        double rn = std::sqrt(dot(rsd, rsd_pole, rsd, rsd_pole));
        last_iters_ = it;
        last_residual_ = rn;
        if (rn <= tol * b_norm || rn <= 1e-16) break;
        if (it == max_iters)
            throw SimError(ErrorCode::SolveFailed,
                           "interior CG failed to converge: rel " + std::to_string(rn / b_norm));
        precondition(rsd, rsd_pole, z, z_pole);
        double rz_new = dot(rsd, rsd_pole, z, z_pole);
        double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < ring; ++i)
            for (size_t j = 0; j < ns_; ++j) p(i, j) = z(i, j) + beta * p(i, j);
        p_pole = z_pole + beta * p_pole;
    }
    for (auto& v : u.raw()) v += psi_mean;
    u_pole += psi_mean;
}

std::vector<double> EllipticOperator::dn_flux(const Field& u, double u_pole) const {
    Field Au(nr_, ns_);
    double Au_pole;
    apply(u, u_pole, Au, Au_pole);
    const double ds = grid_->curve().ds();
    std::vector<double> lam(ns_);
    for (size_t j = 0; j < ns_; ++j) lam[j] = Au(nr_ - 1, j) / ds;
    return lam;
}

InteriorState solve_interior(const EllipticOperator& op, const DiffeoField& diffeo,
                             const ObstacleSpec& obs, const std::vector<double>& psi,
                             const InteriorState* warm) {
    const NTGrid& grid = op.grid();
    InteriorState st;
    if (warm && warm->phi.nr() == grid.nr()) {
        st.phi = warm->phi;
        st.phi_pole = warm->phi_pole;
        op.solve(psi, st.phi, st.phi_pole, nullptr, true);
    } else {
        op.solve(psi, st.phi, st.phi_pole);
    }
    st.v = VecField(grid.nr(), grid.ns());
    diffeo.gradphi(st.phi, st.v);
    st.zeta = Field(grid.nr(), grid.ns());
    st.h = Field(grid.nr(), grid.ns());
    const double R0 = grid.curve().circle_radius;
    for (size_t i = 0; i < grid.nr(); ++i)
        for (size_t j = 0; j < grid.ns(); ++j) {
            double z = obs.zw_radial(R0 + diffeo.R(i, j));
            st.zeta(i, j) = z;
            st.h(i, j) = obs.H0 + z;
        }
    st.dn = op.dn_flux(st.phi, st.phi_pole);
    return st;
}

std::vector<double> dn_map(const EllipticOperator& op, const DiffeoField& diffeo,
                           const ObstacleSpec& obs, const std::vector<double>& psi) {
    InteriorState st = solve_interior(op, diffeo, obs, psi);
    return st.dn;
}

Field recover_pressure(const InteriorState& prev, const InteriorState& curr,
                       const DiffeoField& diffeo, double dt, double rho, double g,
                       double p_atm) {
    if (prev.phi.size() != curr.phi.size() || dt <= 0.0)
        throw SimError(ErrorCode::MissingHistory, "pressure recovery needs two solves");
    const size_t nr = curr.phi.nr(), ns = curr.phi.ns();
    Field p(nr, ns);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < ns; ++j) {
            double dphi_dt = (curr.phi(i, j) - prev.phi(i, j)) / dt;
            Vec2 vi = curr.v.at(i, j);
            double conv = diffeo.dphi_dt.at(i, j).dot(vi);
            p(i, j) = p_atm - rho * (dphi_dt - conv + 0.5 * vi.norm2() + g * curr.zeta(i, j));
        }
    return p;
}

} // namespace foswe
