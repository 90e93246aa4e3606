#include "foswe/obstacle.hpp"

#include <cmath>

namespace foswe {

ObstacleSpec ObstacleSpec::paraboloid(double amplitude, double waterline, double H0) {
    ObstacleSpec o;
    o.kind = Kind::Paraboloid;
    o.amplitude = amplitude;
    o.waterline = waterline;
    o.H0 = H0;
    return o;
}

ObstacleSpec ObstacleSpec::gaussian(double amplitude, double waterline, double sigma, double H0) {
    ObstacleSpec o;
    o.kind = Kind::Gaussian;
    o.amplitude = amplitude;
    o.waterline = waterline;
    o.sigma = sigma;
    o.H0 = H0;
    return o;
}

double ObstacleSpec::zw_radial(double rho) const {
    switch (kind) {
        case Kind::Paraboloid: {
            double q = rho / waterline;
            return amplitude * (q * q - 1.0);
        }
        case Kind::Gaussian: {
            double q = (rho * rho - waterline * waterline) / (2.0 * sigma * sigma);
            return amplitude * (1.0 - std::exp(-q));
        }
        case Kind::Callable:
            return profile(rho);
    }
    return 0.0;
}

double ObstacleSpec::zw_radial_deriv(double rho) const {
    switch (kind) {
        case Kind::Paraboloid:
            return 2.0 * amplitude * rho / (waterline * waterline);
        case Kind::Gaussian: {
            double q = (rho * rho - waterline * waterline) / (2.0 * sigma * sigma);
            return amplitude * std::exp(-q) * rho / (sigma * sigma);
        }
        case Kind::Callable:
            return profile_deriv(rho);
    }
    return 0.0;
}

double ObstacleSpec::min_hw(double rho_max, int samples) const {
    double m = 1e300;
    for (int i = 0; i <= samples; ++i) {
        double rho = rho_max * static_cast<double>(i) / static_cast<double>(samples);
        m = std::min(m, hw_radial(rho));
    }
    return m;
}

} // namespace foswe
