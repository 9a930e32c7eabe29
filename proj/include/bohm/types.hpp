#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bohm {

/// Point in the oscillator plane (dimensionless units, hbar = m = omega = 1).
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const PlanePoint&) const = default;
};

/// Planar velocity vector.
struct PlaneVector {
    double vx = 0.0;
    double vy = 0.0;

    bool operator==(const PlaneVector&) const = default;
};

inline PlanePoint operator+(PlanePoint p, PlaneVector v) { return {p.x + v.vx, p.y + v.vy}; }
inline PlaneVector operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
inline PlaneVector operator*(double s, PlaneVector v) { return {s * v.vx, s * v.vy}; }
inline PlaneVector operator+(PlaneVector a, PlaneVector b) { return {a.vx + b.vx, a.vy + b.vy}; }
inline PlaneVector operator-(PlaneVector a, PlaneVector b) { return {a.vx - b.vx, a.vy - b.vy}; }

inline double dot(PlaneVector a, PlaneVector b) { return a.vx * b.vx + a.vy * b.vy; }
inline double cross(PlaneVector a, PlaneVector b) { return a.vx * b.vy - a.vy * b.vx; }
inline double norm(PlaneVector v) { return std::hypot(v.vx, v.vy); }
inline double distance(PlanePoint a, PlanePoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Row-major 2x2 real matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

inline PlaneVector operator*(const Mat2& m, PlaneVector v) {
    return {m.a11 * v.vx + m.a12 * v.vy, m.a21 * v.vx + m.a22 * v.vy};
}

inline Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a11 - n.a11, m.a12 - n.a12, m.a21 - n.a21, m.a22 - n.a22};
}

/// Solves m * s = r. Throws std::domain_error when m is singular.
inline PlaneVector solve(const Mat2& m, PlaneVector r) {
    const double d = m.det();
    if (d == 0.0) throw std::domain_error("singular 2x2 system");
    return {(m.a22 * r.vx - m.a12 * r.vy) / d, (m.a11 * r.vy - m.a21 * r.vx) / d};
}

/// The velocity field is undefined at a wavefunction node; raised when an
/// evaluation point is too close to one (|psi|^2 below threshold, or a zero
/// denominator in the local vortex field).
class VortexProximityError : public std::runtime_error {
public:
    VortexProximityError(PlanePoint where, double t)
        : std::runtime_error("velocity undefined: point too close to the vortex"),
          where_(where), t_(t) {}
    PlanePoint where() const { return where_; }
    double time() const { return t_; }

private:
    PlanePoint where_;
    double t_;
};

/// State parameters for which the analytic vortex path is undefined
/// (zero excited amplitude or parallel excited phases).
class DegenerateStateError : public std::runtime_error {
public:
    explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory entered the capture radius around the vortex; carries the
/// last valid state so callers can report partial results.
class VortexCaptureError : public std::runtime_error {
public:
    VortexCaptureError(PlanePoint last, double t)
        : std::runtime_error("trajectory captured by the vortex"), last_(last), t_(t) {}
    PlanePoint last_point() const { return last_; }
    double time() const { return t_; }

private:
    PlanePoint last_;
    double t_;
};

class NoConvergenceError : public std::runtime_error {
public:
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

class SingularJacobianError : public std::runtime_error {
public:
    explicit SingularJacobianError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace bohm
