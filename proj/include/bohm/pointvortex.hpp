#pragma once

#include <utility>
#include <vector>

#include "bohm/types.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

/// Prescribed time-periodic path of a unit-circulation point vortex.
/// Three flavors: a fixed point, the closed elliptical curve traced by the
/// three-mode oscillator node, and an arbitrary sampled curve interpolated
/// with a periodic cubic spline (C2, so the integrator's error estimator
/// sees a smooth field).
class PeriodicVortexPath {
public:
    enum class Kind { Stationary, Ellipse, Sampled };

    static PeriodicVortexPath stationary(PlanePoint position = {0.0, 0.0},
                                         double period = kTwoPi);

    /// x(t) =  amplitude_x * sin(gamma2 + t) / sin(gamma1 - gamma2)
    /// y(t) = -amplitude_y * sin(gamma1 + t) / sin(gamma1 - gamma2), period 2*pi;
    /// the same curve the oscillator node follows when amplitude_x = a/(sqrt(2) b)
    /// and amplitude_y = a/(sqrt(2) c).
    static PeriodicVortexPath ellipse(double amplitude_x, double amplitude_y, double gamma1,
                                      double gamma2);

    /// Ellipse path matching the node track of the given state exactly.
    static PeriodicVortexPath from_state(const SuperpositionState& state);

    /// Uniform samples of one period (>= 64 positions), t_i = i * period / n.
    static PeriodicVortexPath sampled(std::vector<PlanePoint> samples, double period);

    PlanePoint at(double t) const;
    double period() const { return period_; }
    Kind kind() const { return kind_; }

private:
    PeriodicVortexPath(Kind kind, double period) : kind_(kind), period_(period) {}

    Kind kind_;
    double period_;
    PlanePoint position_{};                      // Stationary
    double amp_x_ = 0.0, amp_y_ = 0.0;           // Ellipse
    double gamma1_ = 0.0, gamma2_ = 0.0;
    std::vector<PlanePoint> samples_;            // Sampled
    std::vector<PlanePoint> second_derivs_;
};

/// Unit-circulation point-vortex field around the instantaneous path position:
/// vx = -(y - yv)/rho^2, vy = (x - xv)/rho^2. Throws VortexProximityError for
/// rho < 1e-10.
PlaneVector model_velocity(const PeriodicVortexPath& path, double x, double y, double t);

/// H(r, theta, t) = (1/2) log r + r [cos(theta) yv(t) - sin(theta) xv(t)],
/// the time-dependent Hamiltonian of the model in vortex-centered polar
/// coordinates. Diagnostic only; integration always uses the Cartesian field.
double model_hamiltonian(const PeriodicVortexPath& path, double r, double theta, double t);

/// Exact period-T0 flow of the stationary-vortex field in polar coordinates:
/// (r, theta) -> (r, theta + T0 / r^2). Circles are invariant; the rotation
/// rate diverges as the radius shrinks.
std::pair<double, double> unperturbed_map(double r, double theta, double t0);

/// integral over one period of [cos(theta) yv(t) - sin(theta) xv(t)] dt at
/// fixed theta (trapezoid, 2048 nodes; spectrally accurate for the smooth
/// periodic integrand). Zero for mean-free paths.
double condition_integral(const PeriodicVortexPath& path, double theta);

/// VelocityField adapter for the moving point-vortex model.
class PointVortexField final : public VelocityField {
public:
    explicit PointVortexField(PeriodicVortexPath path) : path_(std::move(path)) {}

    PlaneVector velocity(double x, double y, double t) const override {
        return model_velocity(path_, x, y, t);
    }
    double period() const override { return path_.period(); }
    std::optional<PlanePoint> vortex(double t) const override { return path_.at(t); }

    const PeriodicVortexPath& path() const { return path_; }

private:
    PeriodicVortexPath path_;
};

}  // namespace bohm
