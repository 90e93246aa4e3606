#pragma once

#include <cmath>

namespace foswe {

/// Smooth even cutoff built from the exp(-1/x) mollifier:
///   chi(x) = 1 for |x| <= plateau, chi(x) = 0 for |x| >= 1,
/// with a C^infinity transition in between.  Tails and plateau are exact in
/// floating point.  The transition profile is the normalized integral-free
/// form g(t) = e(t) / (e(t) + e(1-t)) with e(t) = exp(-1/t).
class Bump {
public:
    explicit Bump(double plateau = 0.25) : plateau_(plateau) {}

    double plateau() const { return plateau_; }

    double operator()(double x) const {
        double a = std::abs(x);
        if (a <= plateau_) return 1.0;
        if (a >= 1.0) return 0.0;
        double t = (a - plateau_) / (1.0 - plateau_);
        return blend(1.0 - t);
    }

    /// d chi / dx (odd function; zero on plateau and tails).
    double derivative(double x) const {
        double a = std::abs(x);
        if (a <= plateau_ || a >= 1.0) return 0.0;
        double t = (a - plateau_) / (1.0 - plateau_);
        double g = -blend_derivative(1.0 - t) / (1.0 - plateau_);
        return x < 0.0 ? -g : g;
    }

    /// Max of |chi'| over the transition, used to honor the |chi'| <= 1+delta0
    /// normalization: rescale the transition width by widening the support.
    double max_slope() const {
        // g'(1/2) is the peak of the symmetric blend.
        return blend_derivative(0.5) / (1.0 - plateau_);
    }

private:
    static double e(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

    static double blend(double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        double a = e(t), b = e(1.0 - t);
        return a / (a + b);
    }

    static double blend_derivative(double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        double a = e(t), b = e(1.0 - t);
        double da = a / (t * t), db = -b / ((1.0 - t) * (1.0 - t));
        double s = a + b;
        return (da * s - a * (da + db)) / (s * s);
    }

    double plateau_;
};

} // namespace foswe
