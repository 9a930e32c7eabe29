#pragma once

#include <complex>

#include "bohm/types.hpp"

namespace bohm {

using Complex = std::complex<double>;

/// Gradient of a complex scalar field on the plane.
struct ComplexGradient {
    Complex dx;
    Complex dy;
};

/// Superposition of the three lowest isotropic-oscillator eigenstates:
///
///   psi0 = a*phi00 + b*exp(-i*gamma1)*phi10 + c*exp(-i*gamma2)*phi01
///
/// with real amplitudes normalized to a^2 + b^2 + c^2 = 1. Each eigenstate
/// evolves by its stationary phase exp(-i*E*t), so the state stays exact for
/// all times; no PDE solve is involved.
struct SuperpositionState {
    double a;
    double b;
    double c;
    double gamma1;
    double gamma2;

    SuperpositionState(double a_, double b_, double c_, double gamma1_, double gamma2_);

    /// Builds the normalized state used in the figure families: b = c,
    /// parameterized by the amplitude ratio rho = a/b, so
    /// b = c = 1/sqrt(2 + rho^2) and a = rho*b.
    static SuperpositionState from_amplitude_ratio(double rho, double gamma1, double gamma2);
};

/// Physicists' Hermite polynomial H_n(x) by upward recurrence
/// (H0 = 1, H1 = 2x, H_{n+1} = 2x*H_n - 2n*H_{n-1}). Requires n <= 30.
double hermite(int n, double x);

/// E = nx + ny + 1 (hbar = omega = m = 1).
double eigenenergy(int nx, int ny);

/// Normalized real oscillator eigenfunction
/// phi_{nx,ny}(x,y) = exp(-(x^2+y^2)/2) H_nx(x) H_ny(y) / sqrt(pi 2^{nx+ny} nx! ny!).
double eigenfunction(int nx, int ny, double x, double y);

/// Time-evolved three-mode wavefunction value:
///   psi(x,y,t) = a e^{-it} phi00 + b e^{-i(gamma1+2t)} phi10 + c e^{-i(gamma2+2t)} phi01.
/// The ground-state global phase e^{-it} is retained (it cancels in the
/// velocity field but keeps psi(t=0) equal to the defining sum).
Complex evaluate_psi(const SuperpositionState& state, double x, double y, double t);

/// Analytic spatial gradient of evaluate_psi, via H_n' = 2n H_{n-1} and the
/// Gaussian product rule.
ComplexGradient evaluate_grad_psi(const SuperpositionState& state, double x, double y, double t);

}  // namespace bohm
