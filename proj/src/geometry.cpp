#include "foswe/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace foswe {

double ReferenceCurve::max_curvature() const {
    double m = 0.0;
    for (double k : curvature) m = std::max(m, std::abs(k));
    return m;
}

Vec2 ReferenceCurve::point_at(double s) const {
    if (is_circle()) {
        double a = s / circle_radius;
        return {circle_radius * std::cos(a), circle_radius * std::sin(a)};
    }
    // General curves: trigonometric interpolation is available through the
    // sampled arrays; v1 only instantiates circles.
    throw SimError(ErrorCode::InvalidArgument, "point_at: general curve not sampled here");
}

Vec2 ReferenceCurve::tangent_at(double s) const {
    if (is_circle()) {
        double a = s / circle_radius;
        return {-std::sin(a), std::cos(a)};
    }
    throw SimError(ErrorCode::InvalidArgument, "tangent_at: general curve not sampled here");
}

Vec2 ReferenceCurve::normal_at(double s) const { return tangent_at(s).perp() * -1.0; }

double ReferenceCurve::curvature_at(double s) const {
    if (is_circle()) return 1.0 / circle_radius;
    (void)s;
    throw SimError(ErrorCode::InvalidArgument, "curvature_at: general curve not sampled here");
}

ReferenceCurve make_circle_curve(double radius, size_t ns) {
    if (radius <= 0.0)
        throw SimError(ErrorCode::InvalidArgument, "circle radius must be positive");
    if (ns < 8 || ns % 2 != 0)
        throw SimError(ErrorCode::InvalidArgument, "circle sample count must be even and >= 8");
    ReferenceCurve c;
    c.circle_radius = radius;
    c.length = 2.0 * kPi * radius;
    c.tube_halfwidth = radius / 2.0;
    c.point.resize(ns);
    c.tangent.resize(ns);
    c.normal.resize(ns);
    c.curvature.assign(ns, 1.0 / radius);
    for (size_t j = 0; j < ns; ++j) {
        double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(ns);
        c.point[j] = {radius * std::cos(a), radius * std::sin(a)};
        c.tangent[j] = {-std::sin(a), std::cos(a)};
        // n = -x'^perp = (cos, sin): outward.
        c.normal[j] = {std::cos(a), std::sin(a)};
    }
    return c;
}

Vec2 theta_map(const ReferenceCurve& curve, double r, double s) {
    return curve.point_at(s) + r * curve.normal_at(s);
}

double theta_jacobian(const ReferenceCurve& curve, double r, double s) {
    double det = 1.0 + r * curve.curvature_at(s);
    if (det <= 0.0)
        throw SimError(ErrorCode::JacobianDegenerate, "theta chart singular: 1 + r*kappa <= 0");
    return det;
}

std::pair<double, double> theta_inverse(const ReferenceCurve& curve, const Vec2& x) {
    if (curve.is_circle()) {
        double rho = x.norm();
        double a = std::atan2(x.y, x.x);
        if (a < 0.0) a += 2.0 * kPi;
        return {rho - curve.circle_radius, curve.circle_radius * a};
    }
    // Newton on s: minimize distance to the curve, then read off r.
    double s = 0.0;
    double best = 1e300;
    for (size_t j = 0; j < curve.ns(); ++j) {
        double d2 = (x - curve.point[j]).norm2();
        if (d2 < best) {
            best = d2;
            s = curve.s_node(j);
        }
    }
    for (int it = 0; it < 50; ++it) {
        Vec2 p = curve.point_at(s), t = curve.tangent_at(s);
        double kap = curve.curvature_at(s);
        Vec2 d = x - p;
        double g = d.dot(t);
        double gp = -1.0 + d.dot(kap * t.perp());
        double step = g / gp;
        s -= step;
        if (std::abs(step) < 1e-14 * curve.length) break;
    }
    Vec2 p = curve.point_at(s);
    double r = (x - p).dot(curve.normal_at(s));
    return {r, s};
}

double enclosed_area(const ReferenceCurve& curve) {
    // Shoelace with the exact tangent samples: A = 1/2 oint x . n ds.
    double a = 0.0;
    for (size_t j = 0; j < curve.ns(); ++j) a += curve.point[j].dot(curve.normal[j]);
    return 0.5 * a * curve.ds();
}

// ---------------------------------------------------------------------------

double RadialGrid::min_spacing() const {
    double m = 1e300;
    for (size_t i = 0; i + 1 < node.size(); ++i) m = std::min(m, node[i + 1] - node[i]);
    return m;
}

RadialGrid RadialGrid::uniform(double lo, double hi, size_t ncells) {
    if (!(hi > lo) || ncells < 2)
        throw SimError(ErrorCode::InvalidArgument, "bad radial grid bounds");
    RadialGrid g;
    g.node.resize(ncells + 1);
    double dr = (hi - lo) / static_cast<double>(ncells);
    for (size_t i = 0; i <= ncells; ++i) g.node[i] = lo + dr * static_cast<double>(i);
    g.node.back() = hi;
    return g;
}

RadialGrid RadialGrid::stretched_to_hi(double lo, double hi, size_t ncells, double beta) {
    if (beta <= 0.0) return uniform(lo, hi, ncells);
    RadialGrid g;
    g.node.resize(ncells + 1);
    double denom = std::expm1(beta);
    for (size_t i = 0; i <= ncells; ++i) {
        double xi = static_cast<double>(i) / static_cast<double>(ncells);
        double psi = 1.0 - std::expm1(beta * (1.0 - xi)) / denom;
        g.node[i] = lo + (hi - lo) * psi;
    }
    g.node.front() = lo;
    g.node.back() = hi;
    return g;
}

std::vector<double> fd_weights(const std::vector<double>& x, double x0, int m) {
    // Fornberg's algorithm.
    const int n = static_cast<int>(x.size());
    std::vector<double> c(static_cast<size_t>(n) * (m + 1), 0.0);
    auto C = [&](int i, int k) -> double& { return c[static_cast<size_t>(i) * (m + 1) + k]; };
    double c1 = 1.0, c4 = x[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, m);
    return w;
}

RadialDeriv::RadialDeriv(const RadialGrid& grid, int width) : n_(grid.nnodes()), width_(width) {
    if (width != 3 && width != 5)
        throw SimError(ErrorCode::InvalidArgument, "radial stencil width must be 3 or 5");
    if (n_ < static_cast<size_t>(width))
        throw SimError(ErrorCode::InvalidArgument, "radial grid too small for stencil");
    offset_.resize(n_);
    weight_.resize(n_ * width_);
    const int half = width / 2;
    for (size_t i = 0; i < n_; ++i) {
        int lo = static_cast<int>(i) - half;
        lo = std::max(0, std::min(lo, static_cast<int>(n_) - width));
        offset_[i] = lo;
        std::vector<double> xs(grid.node.begin() + lo, grid.node.begin() + lo + width);
        auto w = fd_weights(xs, grid.node[i], 1);
        std::copy(w.begin(), w.end(), weight_.begin() + i * width_);
    }
}

void RadialDeriv::apply(const Field& in, Field& out) const {
    const size_t ns = in.ns();
    for (size_t i = 0; i < n_; ++i) {
        double* o = out.row(i);
        std::fill(o, o + ns, 0.0);
        const double* w = weight_.data() + i * width_;
        for (int p = 0; p < width_; ++p) {
            const double* src = in.row(offset_[i] + p);
            const double wp = w[p];
            for (size_t j = 0; j < ns; ++j) o[j] += wp * src[j];
        }
    }
}

void RadialDeriv::apply_transpose(const Field& in, Field& out) const {
    const size_t ns = in.ns();
    out.fill(0.0);
    for (size_t i = 0; i < n_; ++i) {
        const double* src = in.row(i);
        const double* w = weight_.data() + i * width_;
        for (int p = 0; p < width_; ++p) {
            double* o = out.row(offset_[i] + p);
            const double wp = w[p];
            for (size_t j = 0; j < ns; ++j) o[j] += wp * src[j];
        }
    }
}

void RadialDeriv::apply_profile(const double* in, double* out) const {
    for (size_t i = 0; i < n_; ++i) {
        const double* w = weight_.data() + i * width_;
        double acc = 0.0;
        for (int p = 0; p < width_; ++p) acc += w[p] * in[offset_[i] + p];
        out[i] = acc;
    }
}

std::vector<double> one_sided_weights(const RadialGrid& grid, bool at_lo, int npts) {
    const size_t n = grid.nnodes();
    std::vector<double> xs(npts);
    if (at_lo)
        for (int p = 0; p < npts; ++p) xs[p] = grid.node[p];
    else
        for (int p = 0; p < npts; ++p) xs[p] = grid.node[n - npts + p];
    return fd_weights(xs, at_lo ? grid.node.front() : grid.node.back(), 1);
}

// ---------------------------------------------------------------------------

NTGrid::NTGrid(const ReferenceCurve& curve, RadialGrid radial, int radial_width)
    : curve_(std::make_shared<ReferenceCurve>(curve)),
      spectral_(std::make_shared<Spectral>(curve.ns(), curve.length)),
      radial_(std::move(radial)),
      deriv_r_(radial_, radial_width),
      theta_det_(radial_.nnodes(), curve.ns()),
      quad_weight_(radial_.nnodes(), curve.ns()) {
    const size_t nr = radial_.nnodes(), nsv = curve.ns();
    const double ds = curve.ds();
    for (size_t i = 0; i < nr; ++i) {
        double r = radial_.node[i];
        double wr;
        if (i == 0)
            wr = 0.5 * (radial_.node[1] - radial_.node[0]);
        else if (i == nr - 1)
            wr = 0.5 * (radial_.node[nr - 1] - radial_.node[nr - 2]);
        else
            wr = 0.5 * (radial_.node[i + 1] - radial_.node[i - 1]);
        for (size_t j = 0; j < nsv; ++j) {
            double det = 1.0 + r * curve.curvature[j];
            if (det <= 0.0)
                throw SimError(ErrorCode::JacobianDegenerate,
                               "NTGrid: radial extent crosses the chart singularity");
            theta_det_(i, j) = det;
            quad_weight_(i, j) = wr * ds;
        }
    }
}

void NTGrid::d_s(const Field& f, Field& out) const {
    for (size_t i = 0; i < nr(); ++i) spectral_->derivative(f.row(i), out.row(i));
}

void NTGrid::gradient(const Field& f, VecField& out) const {
    Field dr(nr(), ns()), dsf(nr(), ns());
    d_r(f, dr);
    d_s(f, dsf);
    for (size_t i = 0; i < nr(); ++i) {
        for (size_t j = 0; j < ns(); ++j) {
            const Vec2 n = curve_->normal[j];
            const Vec2 t = curve_->tangent[j];
            double inv_det = 1.0 / theta_det_(i, j);
            Vec2 g = n * dr(i, j) + t * (dsf(i, j) * inv_det);
            out.set(i, j, g);
        }
    }
}

} // namespace foswe
