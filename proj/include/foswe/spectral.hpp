#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "foswe/core.hpp"

namespace foswe {

/// Real Fourier analysis on the periodic arc direction of length L with N
/// equispaced samples.  Wavenumber k runs over 0..N/2 with spatial frequency
/// omega_k = 2*pi*k/L.  Plans are cached per instance; transforms subtract the
/// mean before analysis so constant inputs map to exactly zero oscillatory
/// spectrum (this keeps discrete equilibria bit-exact).
class Spectral {
public:
    Spectral(size_t n, double length);
    ~Spectral();

    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    size_t n() const { return n_; }
    size_t nmodes() const { return n_ / 2 + 1; }
    double length() const { return length_; }
    /// Spatial frequency of integer mode k.
    double omega(size_t k) const { return 2.0 * kPi * static_cast<double>(k) / length_; }
    /// Japanese bracket <k> = sqrt(1 + omega_k^2).
    double bracket(size_t k) const { return std::sqrt(1.0 + omega(k) * omega(k)); }

    /// Forward transform of n real samples into n/2+1 complex coefficients
    /// normalized so that coeff[k] is the amplitude of exp(i*omega_k*s).
    void analyze(const double* in, std::complex<double>* coeff) const;
    /// Inverse of analyze().
    void synthesize(const std::complex<double>* coeff, double* out) const;

    /// d/ds via spectrum.  The Nyquist mode's derivative is zeroed.
    void derivative(const double* in, double* out) const;
    /// Repeated derivative d^m/ds^m.
    void derivative(const double* in, double* out, int order) const;

    /// Multiply each mode by mult[k] (real multiplier), in place allowed.
    void apply_multiplier(const double* in, double* out, const std::vector<double>& mult) const;

    /// Exponential high-mode filter: modes with |k| > cutoff_frac*kmax damped by
    /// exp(-alpha*((|k|-kc)/(kmax-kc))^p).  Mean and low modes untouched.
    std::vector<double> exp_filter_multipliers(double cutoff_frac, double alpha = 36.0,
                                               int p = 8) const;

    /// Periodic Sobolev norm |g|_{H^sigma} via Parseval with <k> weights.
    double sobolev_norm(const double* in, double sigma) const;

    /// Trapezoid (= exact for trig polynomials) integral over the period.
    double integrate(const double* in) const;

private:
    size_t n_;
    double length_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

/// Derivative multipliers i*omega_k are applied in coefficient space; this
/// helper exposes them for tests.
std::vector<double> spectral_derivative_symbol(const Spectral& sp);

} // namespace foswe
