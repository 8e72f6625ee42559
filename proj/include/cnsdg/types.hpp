/// @file types.hpp
/// @brief Small value types and the error hierarchy shared by all modules.

#ifndef CNSDG_TYPES_HPP
#define CNSDG_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace cnsdg {

/// 2-vector used for points, normals, momenta and velocities.
/// One-dimensional problems use the x component and leave y at zero.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    double& operator[](int i) { return i == 0 ? x : y; }
    double operator[](int i) const { return i == 0 ? x : y; }

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Vec2& v) { return v.x * v.x + v.y * v.y; }

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration / input errors (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Mesh geometry not aligned to the requested lattice.
class SnapError : public Error {
public:
    using Error::Error;
};

/// A boundary face is not covered by exactly one boundary segment.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Numerical failures (CLI exit code 2).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A state violated the rho > 0, rho*e > 0 preconditions of a flux/EOS call.
class NonAdmissibleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Limiter precondition failure: a cell average left the admissible set.
class AverageNotAdmissibleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A projection or assembly saw a non-positive nodal density.
class NonPositiveDensityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Algorithm H exhausted its halving budget.
class MaxHalvingsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Strang stepping could not reconcile halving/doubling demands.
class BudgetExceededError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergenceError : public NumericalError {
public:
    NoConvergenceError(const std::string& msg, int iterations_)
        : NumericalError(msg), iterations(iterations_) {}
    int iterations = 0;
};

class LinearSolveError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Dense verification requested on a matrix above the size cap.
class TooLargeError : public Error {
public:
    using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

} // namespace cnsdg

#endif
