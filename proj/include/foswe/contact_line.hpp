#pragma once

#include <vector>

#include "foswe/core.hpp"
#include "foswe/spectral.hpp"

namespace foswe {

/// Graph function gamma(t, s) of the contact line over the reference curve,
/// together with its stored time derivative.  Norms |gamma|_m sum the periodic
/// Sobolev norms of the stored time derivatives:
///   |gamma|_m = sum_{j<=j_stored} |d_t^j gamma|_{H^{m-j}}.
struct ContactLine {
    std::vector<double> gamma;
    std::vector<double> dgamma_dt;

    size_t ns() const { return gamma.size(); }

    static ContactLine zero(size_t ns) {
        ContactLine c;
        c.gamma.assign(ns, 0.0);
        c.dgamma_dt.assign(ns, 0.0);
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (double g : gamma) m = std::max(m, std::abs(g));
        return m;
    }

    /// |gamma|_m (uses gamma and dgamma_dt; higher time derivatives are not
    /// stored, matching the definition restricted to available levels).
    double norm(const Spectral& sp, int m) const;

    /// max|gamma| / (eta0 * r0); > 1 means the tube bound is violated.
    double tube_fraction(double eta0, double r0) const {
        return max_abs() / (eta0 * r0);
    }
};

/// Tube-containment check.  Throws TubeExceeded when max|gamma| > eta0*r0.
void tube_check(const ContactLine& line, double eta0, double r0);

} // namespace foswe
