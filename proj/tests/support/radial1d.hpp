#pragma once

#include <cmath>
#include <vector>

namespace foswe::testing {

/// Axisymmetric shallow water oracle on the annulus rho in [Ri, Ro]:
///   d_t zeta + (1/rho) d_rho (rho h u) = 0
///   d_t u    + d_rho (u^2/2 + g zeta)  = 0
/// with reflecting walls at both ends; 2nd-order central + SSP-RK2 on a fine
/// grid.  Used as the independent reference for radial exterior waves.
struct Radial1D {
    double g = 9.81, H0 = 1.0;
    double Ri = 1.0, Ro = 2.5;
    size_t n = 2048;
    std::vector<double> zeta, u, rho;

    void init(double amp, double center, double width) {
        zeta.assign(n + 1, 0.0);
        u.assign(n + 1, 0.0);
        rho.resize(n + 1);
        for (size_t i = 0; i <= n; ++i) {
            rho[i] = Ri + (Ro - Ri) * static_cast<double>(i) / static_cast<double>(n);
            double q = (rho[i] - center) / width;
            zeta[i] = amp * std::exp(-q * q);
        }
    }

    void rhs(const std::vector<double>& z, const std::vector<double>& v,
             std::vector<double>& dz, std::vector<double>& dv) const {
        const double dr = (Ro - Ri) / static_cast<double>(n);
        std::vector<double> flux(n + 1), bern(n + 1);
        for (size_t i = 0; i <= n; ++i) {
            flux[i] = rho[i] * (H0 + z[i]) * v[i];
            bern[i] = 0.5 * v[i] * v[i] + g * z[i];
        }
        for (size_t i = 1; i < n; ++i) {
            dz[i] = -(flux[i + 1] - flux[i - 1]) / (2.0 * dr) / rho[i];
            dv[i] = -(bern[i + 1] - bern[i - 1]) / (2.0 * dr);
        }
        // reflecting walls: u = 0, one-sided continuity
        dz[0] = -(flux[1] - flux[0]) * 2.0 / (2.0 * dr) / rho[0];
        dz[n] = -(flux[n] - flux[n - 1]) * 2.0 / (2.0 * dr) / rho[n];
        dv[0] = 0.0;
        dv[n] = 0.0;
    }

    void step(double dt) {
        std::vector<double> dz(n + 1), dv(n + 1), z1(n + 1), v1(n + 1);
        rhs(zeta, u, dz, dv);
        for (size_t i = 0; i <= n; ++i) {
            z1[i] = zeta[i] + dt * dz[i];
            v1[i] = u[i] + dt * dv[i];
        }
        v1[0] = 0.0;
        v1[n] = 0.0;
        rhs(z1, v1, dz, dv);
        for (size_t i = 0; i <= n; ++i) {
            zeta[i] = 0.5 * (zeta[i] + z1[i] + dt * dz[i]);
            u[i] = 0.5 * (u[i] + v1[i] + dt * dv[i]);
        }
        u[0] = 0.0;
        u[n] = 0.0;
    }

    void run_to(double T) {
        const double dr = (Ro - Ri) / static_cast<double>(n);
        double t = 0.0;
        while (t < T - 1e-14) {
            double dt = 0.3 * dr / std::sqrt(g * (H0 + 0.1));
            if (t + dt > T) dt = T - t;
            step(dt);
            t += dt;
        }
    }

    double sample(double r) const {
        const double dr = (Ro - Ri) / static_cast<double>(n);
        double x = (r - Ri) / dr;
        size_t i = std::min(static_cast<size_t>(std::max(0.0, x)), n - 1);
        double f = x - static_cast<double>(i);
        return zeta[i] * (1.0 - f) + zeta[i + 1] * f;
    }
};

} // namespace foswe::testing
