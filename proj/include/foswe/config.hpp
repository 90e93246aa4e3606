#pragma once

#include <map>
#include <string>
#include <vector>

#include "foswe/expr.hpp"
#include "foswe/stepper.hpp"

namespace foswe {

/// Flat key-value run configuration with dotted section names.
struct RunConfig {
    // physics
    double g = 9.81, H0 = 1.0, rho = 1000.0, p_atm = 101325.0;
    // geometry
    double R0 = 1.0, r0 = 0.5, R_ext = 3.0;
    size_t Nr_int = 64, Nr_ext = 64, Ns = 128;
    double int_stretch = 3.0; // interior radial clustering strength
    int radial_order = 2;     // exterior radial stencil order (2 or 4)
    int int_radial_order = 4; // interior radial stencil order
    // obstacle
    std::string obstacle_profile = "paraboloid"; // or "gaussian"
    double obstacle_amplitude = 0.2;
    double obstacle_sigma = 0.5;
    // initial data
    Expr zeta0;           // over (x1,x2,r,s); default 0
    Expr v0_x, v0_y;      // default 0
    Expr psi0;            // over s; default 0
    std::vector<double> gamma0_coeffs; // a0 a1 b1 a2 b2 ... Fourier (cos/sin)
    // numerics
    double cfl = 0.4, T_end = 1.0;
    double filter_cutoff = 2.0 / 3.0, filter_alpha = 36.0;
    double eta0 = 0.3, c0 = 0.05;
    double eps_override = 0.0; // 0 = calibrate
    std::string outer_bc = "wall"; // or "radiation"
    std::string velocity_form = "gradient"; // or "advective"
    // output
    std::string output_dir = "out";
    long diag_cadence = 1;
    bool snapshots = false;
    long snapshot_cadence = 0;

    std::map<std::string, std::string> raw; // parsed key/value pairs

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);
    /// Round-trippable serialization of all semantic values.
    std::string serialize() const;
    /// FNV-1a hash of the serialized form (manifest provenance).
    std::string hash() const;
};

/// One violated invariant found by validation.
struct ConfigViolation {
    std::string what;
    std::string where; // offending node / location, when known
};

/// Discretization + initial state built from a config.
struct RunSetup {
    Discretization disc;
    SystemState state;
};

/// Check every load-time invariant (tube geometry, H_w floor, gamma0 inside
/// the tube, initial subcriticality and transversality at the 2*c0 margin).
/// Returns the violations; empty means OK.
std::vector<ConfigViolation> validate_config(const RunConfig& cfg);

/// Build grids, parameters, and the initial state.  Throws ConfigInvalid when
/// validation fails.
RunSetup build_setup(const RunConfig& cfg);

} // namespace foswe
