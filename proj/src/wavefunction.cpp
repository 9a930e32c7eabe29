#include "bohm/wavefunction.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bohm {

SuperpositionState::SuperpositionState(double a_, double b_, double c_, double gamma1_,
                                       double gamma2_)
    : a(a_), b(b_), c(c_), gamma1(gamma1_), gamma2(gamma2_) {
    const double n2 = a * a + b * b + c * c;
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::invalid_argument("superposition amplitudes not normalized: a^2+b^2+c^2 = " +
                                    std::to_string(n2));
}

SuperpositionState SuperpositionState::from_amplitude_ratio(double rho, double gamma1,
                                                            double gamma2) {
    const double b = 1.0 / std::sqrt(2.0 + rho * rho);
    return SuperpositionState(rho * b, b, b, gamma1, gamma2);
}

double hermite(int n, double x) {
    assert(n >= 0 && n <= 30);
    if (n == 0) return 1.0;
    double h_prev = 1.0;
    double h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double h_next = 2.0 * x * h - 2.0 * k * h_prev;
        h_prev = h;
        h = h_next;
    }
    return h;
}

double eigenenergy(int nx, int ny) { return nx + ny + 1.0; }

namespace {

double normalization(int nx, int ny) {
    double fact = 1.0;
    for (int k = 2; k <= nx; ++k) fact *= k;
    for (int k = 2; k <= ny; ++k) fact *= k;
    return 1.0 / std::sqrt(kPi * std::exp2(nx + ny) * fact);
}

}  // namespace

double eigenfunction(int nx, int ny, double x, double y) {
    const double gauss = std::exp(-0.5 * (x * x + y * y));
    return normalization(nx, ny) * gauss * hermite(nx, x) * hermite(ny, y);
}

Complex evaluate_psi(const SuperpositionState& s, double x, double y, double t) {
    const Complex i(0.0, 1.0);
    return s.a * std::exp(-i * t) * eigenfunction(0, 0, x, y) +
           s.b * std::exp(-i * (s.gamma1 + 2.0 * t)) * eigenfunction(1, 0, x, y) +
           s.c * std::exp(-i * (s.gamma2 + 2.0 * t)) * eigenfunction(0, 1, x, y);
}

namespace {

// d/dx [exp(-x^2/2) H_n(x)] = exp(-x^2/2) (2n H_{n-1}(x) - x H_n(x)).
double eigenfunction_dx(int nx, int ny, double x, double y) {
    const double gauss = std::exp(-0.5 * (x * x + y * y));
    const double dHx = (nx > 0) ? 2.0 * nx * hermite(nx - 1, x) : 0.0;
    return normalization(nx, ny) * gauss * (dHx - x * hermite(nx, x)) * hermite(ny, y);
}

double eigenfunction_dy(int nx, int ny, double x, double y) {
    const double gauss = std::exp(-0.5 * (x * x + y * y));
    const double dHy = (ny > 0) ? 2.0 * ny * hermite(ny - 1, y) : 0.0;
    return normalization(nx, ny) * gauss * hermite(nx, x) * (dHy - y * hermite(ny, y));
}

}  // namespace

ComplexGradient evaluate_grad_psi(const SuperpositionState& s, double x, double y, double t) {
    const Complex i(0.0, 1.0);
    const Complex p0 = s.a * std::exp(-i * t);
    const Complex p1 = s.b * std::exp(-i * (s.gamma1 + 2.0 * t));
    const Complex p2 = s.c * std::exp(-i * (s.gamma2 + 2.0 * t));
    return {p0 * eigenfunction_dx(0, 0, x, y) + p1 * eigenfunction_dx(1, 0, x, y) +
                p2 * eigenfunction_dx(0, 1, x, y),
            p0 * eigenfunction_dy(0, 0, x, y) + p1 * eigenfunction_dy(1, 0, x, y) +
                p2 * eigenfunction_dy(0, 1, x, y)};
}

}  // namespace bohm
