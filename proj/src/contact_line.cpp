#include "foswe/contact_line.hpp"

namespace foswe {

double ContactLine::norm(const Spectral& sp, int m) const {
    double total = 0.0;
    total += sp.sobolev_norm(gamma.data(), static_cast<double>(m));
    if (m >= 1 && !dgamma_dt.empty())
        total += sp.sobolev_norm(dgamma_dt.data(), static_cast<double>(m - 1));
    return total;
}

void tube_check(const ContactLine& line, double eta0, double r0) {
    double frac = line.tube_fraction(eta0, r0);
    if (frac > 1.0)
        throw SimError(ErrorCode::TubeExceeded,
                       "contact line left the tube: max|gamma|/(eta0*r0) = " +
                           std::to_string(frac));
}

} // namespace foswe
