#include "bohm/pointvortex.hpp"

#include <cmath>
#include <stdexcept>

namespace bohm {

namespace {

// Second derivatives of the periodic natural cubic spline on a uniform grid.
// Cyclic tridiagonal system M_{i-1} + 4 M_i + M_{i+1} = rhs_i solved with the
// Sherman-Morrison correction of the Thomas algorithm.
std::vector<double> periodic_spline_moments(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ym = y[(i + n - 1) % n];
        const double yp = y[(i + 1) % n];
        rhs[i] = 6.0 * (ym - 2.0 * y[i] + yp) / (h * h);
    }

    auto solve_tridiag = [&](std::vector<double> d, std::vector<double> r) {
        std::vector<double> c(n, 1.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double m = 1.0 / d[i - 1];
            d[i] -= m * c[i - 1];
            r[i] -= m * r[i - 1];
        }
        std::vector<double> x(n);
        x[n - 1] = r[n - 1] / d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / d[i];
        return x;
    };

    // A = tridiag(1,4,1) cyclic; write A = B + u v^T with u = (g,0,...,0,1),
    // v = (1,0,...,0,g) ... use the standard choice g = -d0 perturbation.
    const double alpha = 1.0, beta = 1.0;  // corner entries
    const double g = -4.0;
    std::vector<double> d(n, 4.0);
    d[0] -= g;
    d[n - 1] -= alpha * beta / g;
    std::vector<double> u(n, 0.0);
    u[0] = g;
    u[n - 1] = alpha;

    const std::vector<double> x1 = solve_tridiag(d, rhs);
    const std::vector<double> x2 = solve_tridiag(d, u);
    const double vx1 = x1[0] + beta / g * x1[n - 1];
    const double vx2 = x2[0] + beta / g * x2[n - 1];
    const double factor = vx1 / (1.0 + vx2);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = x1[i] - factor * x2[i];
    return m;
}

}  // namespace

PeriodicVortexPath PeriodicVortexPath::stationary(PlanePoint position, double period) {
    if (period <= 0.0) throw std::invalid_argument("path period must be positive");
    PeriodicVortexPath p(Kind::Stationary, period);
    p.position_ = position;
    return p;
}

PeriodicVortexPath PeriodicVortexPath::ellipse(double amplitude_x, double amplitude_y,
                                               double gamma1, double gamma2) {
    if (std::sin(gamma1 - gamma2) == 0.0)
        throw std::invalid_argument("ellipse path undefined for sin(gamma1-gamma2) = 0");
    PeriodicVortexPath p(Kind::Ellipse, kTwoPi);
    p.amp_x_ = amplitude_x;
    p.amp_y_ = amplitude_y;
    p.gamma1_ = gamma1;
    p.gamma2_ = gamma2;
    return p;
}

PeriodicVortexPath PeriodicVortexPath::from_state(const SuperpositionState& s) {
    if (s.b * s.c == 0.0)
        throw DegenerateStateError("node track undefined: b*c = 0");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return ellipse(s.a * inv_sqrt2 / s.b, s.a * inv_sqrt2 / s.c, s.gamma1, s.gamma2);
}

PeriodicVortexPath PeriodicVortexPath::sampled(std::vector<PlanePoint> samples, double period) {
    if (samples.size() < 64) throw std::invalid_argument("sampled path needs >= 64 positions");
    if (period <= 0.0) throw std::invalid_argument("path period must be positive");
    PeriodicVortexPath p(Kind::Sampled, period);
    const double h = period / static_cast<double>(samples.size());
    std::vector<double> xs(samples.size()), ys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        xs[i] = samples[i].x;
        ys[i] = samples[i].y;
    }
    const auto mx = periodic_spline_moments(xs, h);
    const auto my = periodic_spline_moments(ys, h);
    p.samples_ = std::move(samples);
    p.second_derivs_.resize(p.samples_.size());
    for (std::size_t i = 0; i < p.samples_.size(); ++i) p.second_derivs_[i] = {mx[i], my[i]};
    return p;
}

PlanePoint PeriodicVortexPath::at(double t) const {
    switch (kind_) {
        case Kind::Stationary:
            return position_;
        case Kind::Ellipse: {
            const double inv_sin = 1.0 / std::sin(gamma1_ - gamma2_);
            return {amp_x_ * std::sin(gamma2_ + t) * inv_sin,
                    -amp_y_ * std::sin(gamma1_ + t) * inv_sin};
        }
        case Kind::Sampled: {
            const std::size_t n = samples_.size();
            const double h = period_ / static_cast<double>(n);
            double s = std::fmod(t, period_);
            if (s < 0.0) s += period_;
            std::size_t i = static_cast<std::size_t>(s / h);
            if (i >= n) i = n - 1;
            const std::size_t j = (i + 1) % n;
            const double u = s / h - static_cast<double>(i);
            const double w = 1.0 - u;
            const double cu = (u * u * u - u) * h * h / 6.0;
            const double cw = (w * w * w - w) * h * h / 6.0;
            return {w * samples_[i].x + u * samples_[j].x + cw * second_derivs_[i].x +
                        cu * second_derivs_[j].x,
                    w * samples_[i].y + u * samples_[j].y + cw * second_derivs_[i].y +
                        cu * second_derivs_[j].y};
        }
    }
    return {};
}

PlaneVector model_velocity(const PeriodicVortexPath& path, double x, double y, double t) {
    const PlanePoint rv = path.at(t);
    const double dx = x - rv.x;
    const double dy = y - rv.y;
    const double rho2 = dx * dx + dy * dy;
    if (rho2 < 1e-20) throw VortexProximityError({x, y}, t);
    return {-dy / rho2, dx / rho2};
}

double model_hamiltonian(const PeriodicVortexPath& path, double r, double theta, double t) {
    if (r <= 0.0) throw std::domain_error("model_hamiltonian requires r > 0");
    const PlanePoint rv = path.at(t);
    return 0.5 * std::log(r) + r * (std::cos(theta) * rv.y - std::sin(theta) * rv.x);
}

std::pair<double, double> unperturbed_map(double r, double theta, double t0) {
    if (r <= 0.0) throw std::domain_error("unperturbed_map requires r > 0");
    return {r, theta + t0 / (r * r)};
}

double condition_integral(const PeriodicVortexPath& path, double theta) {
    const int n = 2048;
    const double t0 = path.period();
    const double h = t0 / n;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {  // end corrections cancel on the periodic grid
        const PlanePoint rv = path.at(i * h);
        sum += ct * rv.y - st * rv.x;
    }
    return sum * h;
}

}  // namespace bohm
