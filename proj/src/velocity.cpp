#include "bohm/velocity.hpp"

#include <cmath>
#include <stdexcept>

namespace bohm {

namespace {
constexpr double kNodeDensityFloor = 1e-24;  // |psi|^2 below this: no usable phase
}

PlaneVector bohm_velocity(const SuperpositionState& state, double x, double y, double t) {
    const Complex psi = evaluate_psi(state, x, y, t);
    const double density = std::norm(psi);
    if (density < kNodeDensityFloor) throw VortexProximityError({x, y}, t);
    const ComplexGradient grad = evaluate_grad_psi(state, x, y, t);
    return {std::imag(grad.dx * std::conj(psi)) / density,
            std::imag(grad.dy * std::conj(psi)) / density};
}

PlanePoint vortex_position(const SuperpositionState& s, double t) {
    const double sin_dg = std::sin(s.gamma1 - s.gamma2);
    if (s.b * s.c == 0.0 || sin_dg == 0.0)
        throw DegenerateStateError("vortex path undefined: b*c = 0 or sin(gamma1-gamma2) = 0");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {s.a * inv_sqrt2 / s.b * std::sin(s.gamma2 + t) / sin_dg,
            -s.a * inv_sqrt2 / s.c * std::sin(s.gamma1 + t) / sin_dg};
}

PlaneVector near_vortex_velocity(const ComplexGradient& w, PlanePoint rv, double x, double y) {
    const double dx = x - rv.x;
    const double dy = y - rv.y;
    const Complex dw = dx * w.dx + dy * w.dy;
    const double denom = std::norm(dw);
    const double w2 = std::norm(w.dx) + std::norm(w.dy);
    const double d2 = dx * dx + dy * dy;
    if (w2 == 0.0 || denom <= 1e-24 * w2 * d2) throw VortexProximityError({x, y}, 0.0);
    const double swirl = std::imag(w.dx * std::conj(w.dy));
    return {swirl * dy / denom, -swirl * dx / denom};
}

ClosedContour::ClosedContour(std::vector<PlanePoint> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 64) throw std::invalid_argument("closed contour needs >= 64 nodes");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (distance(nodes_[i], nodes_[i + 1]) == 0.0)
            throw std::invalid_argument("closed contour has coincident consecutive nodes");
}

ClosedContour ClosedContour::circle(PlanePoint center, double radius, int n_nodes) {
    std::vector<PlanePoint> pts;
    pts.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double phi = kTwoPi * i / n_nodes;
        pts.push_back({center.x + radius * std::cos(phi), center.y + radius * std::sin(phi)});
    }
    return ClosedContour(std::move(pts));
}

namespace {

double chord_trapezoid(const std::vector<PlanePoint>& pts, const std::vector<PlaneVector>& v,
                       std::size_t stride) {
    const std::size_t n = pts.size();
    double gamma = 0.0;
    for (std::size_t i = 0; i < n; i += stride) {
        const std::size_t j = (i + stride) % n;
        const PlaneVector dr = pts[j] - pts[i];
        gamma += 0.5 * (dot(v[i], dr) + dot(v[j], dr));
    }
    return gamma;
}

}  // namespace

double circulation(const VelocityField& field, const ClosedContour& contour, double t) {
    const auto& pts = contour.nodes();
    const std::size_t n = pts.size();
    std::vector<PlaneVector> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = field.velocity(pts[i].x, pts[i].y, t);
    const double fine = chord_trapezoid(pts, v, 1);
    // The chord polygon biases the integral by O(h^2); one Richardson step
    // against the half-resolution polygon removes it.
    if (n % 2 == 0) {
        const double coarse = chord_trapezoid(pts, v, 2);
        return fine + (fine - coarse) / 3.0;
    }
    return fine;
}

BohmianField::BohmianField(SuperpositionState state)
    : state_(state),
      has_vortex_track_(state.b * state.c != 0.0 &&
                        std::sin(state.gamma1 - state.gamma2) != 0.0) {}

PlaneVector BohmianField::velocity(double x, double y, double t) const {
    return bohm_velocity(state_, x, y, t);
}

std::optional<PlanePoint> BohmianField::vortex(double t) const {
    if (!has_vortex_track_) return std::nullopt;
    return vortex_position(state_, t);
}

}  // namespace bohm
