#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace foswe {

using std::size_t;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Error handling: one exception type, stable codes keyed to CLI exit codes.
// ---------------------------------------------------------------------------

enum class ErrorCode : int {
    ConfigInvalid = 2,
    DepthNonpositive = 3,
    SubcriticalViolated = 4,
    TransversalityLost = 5,
    TubeExceeded = 6,
    SolveFailed = 7,
    JacobianDegenerate = 8,
    MissingHistory = 9,
    InvalidArgument = 10,
};

class SimError : public std::runtime_error {
public:
    SimError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }
    int exit_code() const {
        // Codes above TubeExceeded all surface as "solver" failures.
        int c = static_cast<int>(code_);
        return c <= 7 ? c : 7;
    }

private:
    ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra for chart work.
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double a) const { return {a * x, a * y}; }
    Vec2 operator/(double a) const { return {x / a, y / a}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    // Counterclockwise quarter turn: (a,b)^perp = (-b,a).
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double a, const Vec2& v) { return {a * v.x, a * v.y}; }

// 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    // Adjugate: det(A) * A^{-1}; defined for singular A too.
    Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }
    Mat2 inverse() const {
        double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

// ---------------------------------------------------------------------------
// Grid fields.  Layout is row-major with the radial index major and the
// periodic arc index minor, matching the checkpoint format.
// ---------------------------------------------------------------------------

class Field {
public:
    Field() = default;
    Field(size_t nr, size_t ns, double value = 0.0)
        : nr_(nr), ns_(ns), data_(nr * ns, value) {}

    size_t nr() const { return nr_; }
    size_t ns() const { return ns_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(size_t i, size_t j) { return data_[i * ns_ + j]; }
    double operator()(size_t i, size_t j) const { return data_[i * ns_ + j]; }
    double* row(size_t i) { return data_.data() + i * ns_; }
    const double* row(size_t i) const { return data_.data() + i * ns_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    size_t nr_ = 0, ns_ = 0;
    std::vector<double> data_;
};

struct VecField {
    Field x, y;

    VecField() = default;
    VecField(size_t nr, size_t ns) : x(nr, ns), y(nr, ns) {}

    size_t nr() const { return x.nr(); }
    size_t ns() const { return x.ns(); }
    Vec2 at(size_t i, size_t j) const { return {x(i, j), y(i, j)}; }
    void set(size_t i, size_t j, const Vec2& v) { x(i, j) = v.x; y(i, j) = v.y; }
    double max_abs() const { return std::max(x.max_abs(), y.max_abs()); }
};

// Per-node 2x2 matrix field.
struct MatField {
    Field a11, a12, a21, a22;

    MatField() = default;
    MatField(size_t nr, size_t ns) : a11(nr, ns), a12(nr, ns), a21(nr, ns), a22(nr, ns) {}

    size_t nr() const { return a11.nr(); }
    size_t ns() const { return a11.ns(); }
    Mat2 at(size_t i, size_t j) const {
        return {a11(i, j), a12(i, j), a21(i, j), a22(i, j)};
    }
    void set(size_t i, size_t j, const Mat2& m) {
        a11(i, j) = m.a11; a12(i, j) = m.a12; a21(i, j) = m.a21; a22(i, j) = m.a22;
    }
};

} // namespace foswe
