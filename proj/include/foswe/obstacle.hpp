#pragma once

#include <functional>
#include <string>
#include <vector>

#include "foswe/core.hpp"

namespace foswe {

/// Bottom profile Z_w of the partially immersed body over the interior chart.
/// v1 ships two radial families (waterline exactly at rho = R_w in floating
/// point) plus an arbitrary callable for tests:
///   paraboloid:  Z_w(rho) = a * ((rho/R_w)^2 - 1)
///   gaussian:    Z_w(rho) = a * (1 - exp(-(rho^2 - R_w^2)/(2 sigma^2)))
struct ObstacleSpec {
    enum class Kind { Paraboloid, Gaussian, Callable };

    Kind kind = Kind::Paraboloid;
    double amplitude = 0.2; // a
    double waterline = 1.0; // R_w
    double sigma = 0.5;     // gaussian width

    // general profile (radial) and gradient for Kind::Callable
    std::function<double(double)> profile;
    std::function<double(double)> profile_deriv;

    double H0 = 1.0; // still water depth
    double c0 = 0.0; // floor for H_w (validated, not enforced pointwise here)

    static ObstacleSpec paraboloid(double amplitude, double waterline, double H0);
    static ObstacleSpec gaussian(double amplitude, double waterline, double sigma, double H0);

    /// Z_w as a function of the physical radius rho (exact zero at waterline).
    double zw_radial(double rho) const;
    /// d Z_w / d rho.
    double zw_radial_deriv(double rho) const;

    double zw(const Vec2& x) const { return zw_radial(x.norm()); }
    Vec2 grad_zw(const Vec2& x) const {
        double rho = x.norm();
        if (rho == 0.0) return {0.0, 0.0};
        double d = zw_radial_deriv(rho);
        return {d * x.x / rho, d * x.y / rho};
    }

    double hw_radial(double rho) const { return H0 + zw_radial(rho); }

    /// min H_w over [0, rho_max] by dense scan (load-time validation).
    double min_hw(double rho_max, int samples = 4096) const;
};

} // namespace foswe
