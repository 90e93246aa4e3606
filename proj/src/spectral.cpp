#include "foswe/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>

namespace foswe {

struct Spectral::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    size_t n = 0;

    explicit Plans(size_t n_) : n(n_) {
        rbuf = fftw_alloc_real(n);
        cbuf = fftw_alloc_complex(n / 2 + 1);
        // FFTW_ESTIMATE keeps plan selection deterministic across runs.
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), rbuf, cbuf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), cbuf, rbuf, FFTW_ESTIMATE);
    }
    ~Plans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
};

Spectral::Spectral(size_t n, double length)
    : n_(n), length_(length), plans_(std::make_unique<Plans>(n)) {
    if (n < 4 || n % 2 != 0)
        throw SimError(ErrorCode::InvalidArgument, "spectral size must be even and >= 4");
    if (length <= 0.0)
        throw SimError(ErrorCode::InvalidArgument, "spectral period must be positive");
}

Spectral::~Spectral() = default;

namespace {

// Pairwise summation: exact for constant vectors of power-of-two length
// (every partial add is x + x), and more accurate in general.
double pairwise_sum(const double* x, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

} // namespace

void Spectral::analyze(const double* in, std::complex<double>* coeff) const {
    const size_t n = n_;
    double mean = pairwise_sum(in, n) / static_cast<double>(n);
    for (size_t j = 0; j < n; ++j) plans_->rbuf[j] = in[j] - mean;
    fftw_execute(plans_->fwd);
    const double scale = 1.0 / static_cast<double>(n);
    coeff[0] = std::complex<double>(mean, 0.0);
    for (size_t k = 1; k < nmodes(); ++k)
        coeff[k] = std::complex<double>(plans_->cbuf[k][0], plans_->cbuf[k][1]) * scale;
}

void Spectral::synthesize(const std::complex<double>* coeff, double* out) const {
    const size_t n = n_;
    plans_->cbuf[0][0] = 0.0;
    plans_->cbuf[0][1] = 0.0;
    for (size_t k = 1; k < nmodes(); ++k) {
        plans_->cbuf[k][0] = coeff[k].real();
        plans_->cbuf[k][1] = coeff[k].imag();
    }
    fftw_execute(plans_->bwd);
    const double mean = coeff[0].real();
    for (size_t j = 0; j < n; ++j) out[j] = plans_->rbuf[j] + mean;
}

void Spectral::derivative(const double* in, double* out) const {
    derivative(in, out, 1);
}

void Spectral::derivative(const double* in, double* out, int order) const {
    std::vector<std::complex<double>> c(nmodes());
    analyze(in, c.data());
    c[0] = 0.0;
    for (size_t k = 1; k < nmodes(); ++k) {
        std::complex<double> iw(0.0, omega(k));
        std::complex<double> m = 1.0;
        for (int p = 0; p < order; ++p) m *= iw;
        c[k] *= m;
    }
    // Odd derivatives of the unpaired Nyquist mode are not representable.
    if (n_ % 2 == 0 && order % 2 == 1) c[nmodes() - 1] = 0.0;
    synthesize(c.data(), out);
}

void Spectral::apply_multiplier(const double* in, double* out,
                                const std::vector<double>& mult) const {
    std::vector<std::complex<double>> c(nmodes());
    analyze(in, c.data());
    for (size_t k = 0; k < nmodes(); ++k) c[k] *= mult[k];
    synthesize(c.data(), out);
}

std::vector<double> Spectral::exp_filter_multipliers(double cutoff_frac, double alpha,
                                                     int p) const {
    std::vector<double> m(nmodes(), 1.0);
    const double kmax = static_cast<double>(nmodes() - 1);
    const double kc = cutoff_frac * kmax;
    for (size_t k = 1; k < nmodes(); ++k) {
        double kk = static_cast<double>(k);
        if (kk > kc) {
            double eta = (kk - kc) / (kmax - kc);
            m[k] = std::exp(-alpha * std::pow(eta, p));
        }
    }
    return m;
}

double Spectral::sobolev_norm(const double* in, double sigma) const {
    std::vector<std::complex<double>> c(nmodes());
    analyze(in, c.data());
    // |g|^2 = L * sum_k <k>^{2 sigma} |c_k|^2 over all integer modes; the r2c
    // half-spectrum counts k and -k together except k=0 and Nyquist.
    double sum = std::pow(1.0, sigma) * std::norm(c[0]);
    for (size_t k = 1; k < nmodes(); ++k) {
        double w = std::pow(bracket(k) * bracket(k), sigma);
        double mult = (n_ % 2 == 0 && k == nmodes() - 1) ? 1.0 : 2.0;
        sum += mult * w * std::norm(c[k]);
    }
    return std::sqrt(length_ * sum);
}

double Spectral::integrate(const double* in) const {
    return pairwise_sum(in, n_) * length_ / static_cast<double>(n_);
}

std::vector<double> spectral_derivative_symbol(const Spectral& sp) {
    std::vector<double> sym(sp.nmodes());
    for (size_t k = 0; k < sp.nmodes(); ++k) sym[k] = sp.omega(k);
    return sym;
}

} // namespace foswe
