#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foswe/core.hpp"
#include "foswe/hanzawa.hpp"

namespace foswe {

/// First-order jet (value + gradient) with exact arithmetic propagation; the
/// identity checks build both sides of each identity from jets of band-limited
/// trigonometric fields, so every derivative is analytic and residuals sit at
/// rounding level.
struct Jet {
    double v = 0.0, dx = 0.0, dy = 0.0;

    Jet() = default;
    Jet(double v_, double dx_, double dy_) : v(v_), dx(dx_), dy(dy_) {}
    static Jet constant(double c) { return {c, 0.0, 0.0}; }

    Jet operator+(const Jet& o) const { return {v + o.v, dx + o.dx, dy + o.dy}; }
    Jet operator-(const Jet& o) const { return {v - o.v, dx - o.dx, dy - o.dy}; }
    Jet operator*(const Jet& o) const {
        return {v * o.v, dx * o.v + v * o.dx, dy * o.v + v * o.dy};
    }
    Jet operator/(const Jet& o) const {
        double iv = 1.0 / o.v;
        double q = v * iv;
        return {q, (dx - q * o.dx) * iv, (dy - q * o.dy) * iv};
    }
    Jet operator*(double a) const { return {a * v, a * dx, a * dy}; }
    Jet operator-() const { return {-v, -dx, -dy}; }
};

/// Real band-limited trigonometric polynomial on the [0,Lx) x [0,Ly) torus
/// with coefficients ~ U[-1,1]/(1+|k|^3); value and derivatives to second
/// order are evaluated analytically.
class TrigField {
public:
    TrigField() = default;
    /// Deterministic construction from a seeded engine state.
    static TrigField random(std::uint64_t seed, int band, double amplitude, double lx, double ly);

    double value(double x, double y) const;
    double d(double x, double y, int ox, int oy) const; // derivative order (ox,oy)

    Jet jet(double x, double y) const {
        return {value(x, y), d(x, y, 1, 0), d(x, y, 0, 1)};
    }
    Jet jet_dx(double x, double y) const {
        return {d(x, y, 1, 0), d(x, y, 2, 0), d(x, y, 1, 1)};
    }
    Jet jet_dy(double x, double y) const {
        return {d(x, y, 0, 1), d(x, y, 1, 1), d(x, y, 0, 2)};
    }

private:
    struct Mode {
        double kx, ky, amp, phase;
    };
    std::vector<Mode> modes_;
};

struct RandomFieldSpec {
    std::uint64_t seed = 1;
    int band = 4;             // top wavenumber K
    double amplitude = 1.0;
    double phi_amplitude = 0.08; // diffeo perturbation scale (keeps J near 1)
    int samples = 24;            // evaluation grid per direction
    double lx = 2.0 * kPi, ly = 2.0 * kPi;
};

/// Max residual of each identity, keyed by name:
///   F1, F2, F3a, F3b, F4a, F4b, F4c.
std::map<std::string, double> check_vector_identities(const RandomFieldSpec& spec);

/// Linearization rules and good-unknown commutation:
///   lin-grad, lin-div, lin-dt, gu-grad, gu-const.
std::map<std::string, double> check_linearization_rules(const RandomFieldSpec& spec);

/// Pointwise Rellich identity residual on random fields (exact derivatives).
double check_rellich_identity(const RandomFieldSpec& spec);

/// Divergence theorem on the exterior chart: for f supported near the ring,
///   int_E J div^phi f = - oint_Gamma N^phi . f.
/// Returns the relative mismatch of the two quadratures on an Nr x Ns grid
/// with a seeded band-limited gamma and f; converges at the scheme order.
double check_divergence_theorem(std::uint64_t seed, size_t nr, size_t ns);

} // namespace foswe
