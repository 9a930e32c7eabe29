#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bohm/types.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

/// Time-dependent planar velocity field with a declared temporal period and,
/// where available, a closed-form vortex-position track. Implementations are
/// immutable once built and safe to share across threads.
class VelocityField {
public:
    virtual ~VelocityField() = default;

    /// Field value at (x, y, t). Throws VortexProximityError near a node.
    virtual PlaneVector velocity(double x, double y, double t) const = 0;

    /// Temporal period T0 of the field (> 0).
    virtual double period() const = 0;

    /// Instantaneous vortex position, when the field can locate it.
    virtual std::optional<PlanePoint> vortex(double t) const = 0;
};

/// v = Im(grad psi / psi) with m = 1. Throws VortexProximityError when
/// |psi|^2 < 1e-24 (no meaningful phase gradient in double precision below).
PlaneVector bohm_velocity(const SuperpositionState& state, double x, double y, double t);

/// Closed-form node position of the three-mode state. The state must have
/// b != 0, c != 0 and sin(gamma1 - gamma2) != 0, else DegenerateStateError.
PlanePoint vortex_position(const SuperpositionState& state, double t);

/// Local field around a node at rv with wavefunction gradient w there:
///
///   v = Im(w_x conj(w_y)) * (dy, -dx) / |d . w|^2,   d = (x,y) - rv,
///
/// the planar reduction of the double-cross-product form consistent with
/// bohm_velocity as d -> 0 (psi ~ d.w near the node). For w_x = -i w_y this
/// is exactly the unit-circulation point-vortex field; scaling w by any
/// nonzero complex factor leaves the value unchanged.
PlaneVector near_vortex_velocity(const ComplexGradient& w, PlanePoint rv, double x, double y);

/// Closed polygonal contour for circulation measurement. At least 64 nodes,
/// consecutive nodes distinct; the closing edge is implicit.
class ClosedContour {
public:
    explicit ClosedContour(std::vector<PlanePoint> nodes);

    static ClosedContour circle(PlanePoint center, double radius, int n_nodes = 256);

    const std::vector<PlanePoint>& nodes() const { return nodes_; }

private:
    std::vector<PlanePoint> nodes_;
};

/// Line integral of the field around the contour at fixed time, composite
/// trapezoid over the polyline. Quantized to 2*pi*n around an enclosed vortex.
double circulation(const VelocityField& field, const ClosedContour& contour, double t);

/// The full Bohmian field of a three-mode state; period 2*pi.
class BohmianField final : public VelocityField {
public:
    explicit BohmianField(SuperpositionState state);

    PlaneVector velocity(double x, double y, double t) const override;
    double period() const override { return kTwoPi; }
    std::optional<PlanePoint> vortex(double t) const override;

    const SuperpositionState& state() const { return state_; }

private:
    SuperpositionState state_;
    bool has_vortex_track_;
};

}  // namespace bohm
