#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "foswe/core.hpp"
#include "foswe/spectral.hpp"

namespace foswe {

/// Closed positively oriented reference curve, arc-length parameterized and
/// sampled at ns equispaced points of the circle of perimeter `length`.
/// Conventions (fixed project-wide):
///   (a,b)^perp = (-b, a)  (counterclockwise quarter turn),
///   n(s) = -x'(s)^perp    (unit outward normal),
///   x''(s) = kappa(s) x'(s)^perp.
class ReferenceCurve {
public:
    double length = 0.0;       // arc length L
    double tube_halfwidth = 0; // r0
    std::vector<Vec2> point;   // x(s_j)
    std::vector<Vec2> tangent; // x'(s_j), unit
    std::vector<Vec2> normal;  // n(s_j), unit outward
    std::vector<double> curvature;

    // Analytic circle data (v1 restricts to circles; radius <= 0 marks a
    // general sampled curve).
    double circle_radius = -1.0;

    size_t ns() const { return point.size(); }
    double ds() const { return length / static_cast<double>(ns()); }
    double s_node(size_t j) const { return ds() * static_cast<double>(j); }
    double max_curvature() const;

    bool is_circle() const { return circle_radius > 0.0; }

    /// Smooth evaluation at arbitrary arc parameter (exact for circles).
    Vec2 point_at(double s) const;
    Vec2 tangent_at(double s) const;
    Vec2 normal_at(double s) const;
    double curvature_at(double s) const;
};

/// Circle of radius R0 centered at the origin; r0 defaults to R0/2.
ReferenceCurve make_circle_curve(double radius, size_t ns);

/// Tubular-chart map theta(r,s) = x(s) + r n(s).
Vec2 theta_map(const ReferenceCurve& curve, double r, double s);

/// Jacobian determinant 1 + r*kappa(s) of theta; throws past the chart
/// singularity.
double theta_jacobian(const ReferenceCurve& curve, double r, double s);

/// Inverse chart point -> (r,s); analytic for circles, Newton otherwise.
/// Valid while 1 + r*kappa >= 0.1.
std::pair<double, double> theta_inverse(const ReferenceCurve& curve, const Vec2& x);

/// Signed enclosed area (positive for positively oriented curves).
double enclosed_area(const ReferenceCurve& curve);

// ---------------------------------------------------------------------------
// Radial grids.  Nodes r_0 < r_1 < ... < r_n; spacing may be nonuniform (the
// interior chart stretches toward the contact ring).
// ---------------------------------------------------------------------------

struct RadialGrid {
    std::vector<double> node;

    size_t ncells() const { return node.size() - 1; }
    size_t nnodes() const { return node.size(); }
    double lo() const { return node.front(); }
    double hi() const { return node.back(); }
    double min_spacing() const;

    static RadialGrid uniform(double lo, double hi, size_t ncells);
    /// Exponential clustering toward `hi` with strength beta (beta = 0 gives
    /// a uniform grid).
    static RadialGrid stretched_to_hi(double lo, double hi, size_t ncells, double beta);
};

/// First-derivative stencils on a radial grid: interior stencils of `width`
/// nodes (3 -> 2nd order, 5 -> 4th order on uniform grids), one-sided at the
/// ends, generated by polynomial fitting so nonuniform grids keep the order.
class RadialDeriv {
public:
    RadialDeriv() = default;
    RadialDeriv(const RadialGrid& grid, int width);

    size_t nnodes() const { return n_; }
    int width() const { return width_; }

    /// Apply along the radial (major) index of a field: out = d(in)/dr.
    void apply(const Field& in, Field& out) const;
    /// Apply the transpose (used by the symmetric weak-form assembly).
    void apply_transpose(const Field& in, Field& out) const;
    /// Derivative of one radial profile.
    void apply_profile(const double* in, double* out) const;

    /// Row i's stencil: offsets[i] is the first node of the window.
    const std::vector<int>& offsets() const { return offset_; }
    const std::vector<double>& weights() const { return weight_; } // n_ x width_

private:
    size_t n_ = 0;
    int width_ = 0;
    std::vector<int> offset_;
    std::vector<double> weight_;
};

/// One-sided first-derivative weights at the first (`at_lo`) or last node of
/// `grid` using `npts` nodes (3 -> 2nd order).
std::vector<double> one_sided_weights(const RadialGrid& grid, bool at_lo, int npts);

/// Fornberg finite-difference weights for derivative order m at x0.
std::vector<double> fd_weights(const std::vector<double>& x, double x0, int m);

// ---------------------------------------------------------------------------
// The (r,s) computation grid over the tubular chart.
// ---------------------------------------------------------------------------

/// Grid over the reference chart with spectral arc direction and FD radial
/// direction.  Carries theta-metric samples and the differential operators of
/// the *reference* chart (the moved-chart operators live in DiffeoField).
class NTGrid {
public:
    /// The grid owns a copy of the curve, so callers may pass temporaries.
    NTGrid(const ReferenceCurve& curve, RadialGrid radial, int radial_width = 3);

    const ReferenceCurve& curve() const { return *curve_; }
    const RadialGrid& radial() const { return radial_; }
    const RadialDeriv& deriv_r() const { return deriv_r_; }
    const Spectral& spectral() const { return *spectral_; }

    size_t nr() const { return radial_.nnodes(); }
    size_t ns() const { return curve_->ns(); }
    double r_node(size_t i) const { return radial_.node[i]; }
    double s_node(size_t j) const { return curve_->s_node(j); }

    /// det d(theta) = 1 + r kappa(s) per node.
    const Field& theta_det() const { return theta_det_; }
    Vec2 position(size_t i, size_t j) const {
        return curve_->point[j] + radial_.node[i] * curve_->normal[j];
    }

    /// Chart derivatives of a scalar sampled on the grid.
    void d_r(const Field& f, Field& out) const { deriv_r_.apply(f, out); }
    void d_s(const Field& f, Field& out) const;

    /// Normal/tangential derivatives: d_nor = d/dr, d_tan = d/ds in chart.
    void nt_derivatives(const Field& f, Field& dnor, Field& dtan) const {
        d_r(f, dnor);
        d_s(f, dtan);
    }

    /// Cartesian gradient reconstructed from chart derivatives via
    /// grad = N d_nor + T d_tan / |T|^2 with T = (1+r kappa) x'.
    void gradient(const Field& f, VecField& out) const;

    /// Trapezoid-in-r x exact-in-s quadrature weight per node (dr ds measure).
    const Field& quad_weight() const { return quad_weight_; }

private:
    std::shared_ptr<const ReferenceCurve> curve_;
    std::shared_ptr<Spectral> spectral_;
    RadialGrid radial_;
    RadialDeriv deriv_r_;
    Field theta_det_;
    Field quad_weight_;
};

} // namespace foswe
