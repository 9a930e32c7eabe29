#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bohm/types.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double min_step = 1e-14;
    double vortex_cutoff = 1e-6;     // capture radius around the node
    std::int64_t max_steps = 100000000;

    bool operator==(const IntegratorSettings&) const = default;
};

enum class TerminationStatus { Completed, VortexCapture, StepLimit };

const char* to_string(TerminationStatus status);

struct TrajectorySample {
    double t;
    PlanePoint point;
};

/// Time-stamped points of one integrated trajectory, in integration order.
/// On VortexCapture or StepLimit the last sample is the last valid state.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    TerminationStatus status = TerminationStatus::Completed;
};

/// One accepted integrator step with its fifth-order dense interpolant,
/// handed to step observers.
class DenseStep {
public:
    DenseStep(double t0, double h, PlanePoint y0, PlanePoint y1, const double* rcont)
        : t0_(t0), h_(h), y0_(y0), y1_(y1) {
        for (int i = 0; i < 10; ++i) rcont_[i] = rcont[i];
    }

    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + h_; }
    PlanePoint begin() const { return y0_; }
    PlanePoint end() const { return y1_; }

    /// Interpolated state at t inside [t_begin, t_end].
    PlanePoint at(double t) const;

private:
    double t0_, h_;
    PlanePoint y0_, y1_;
    double rcont_[10];  // x then y quintuples
};

using StepObserver = std::function<void(const DenseStep&)>;

/// Adaptive Dormand-Prince 5(4) integration of dx/dt = field.velocity(x, t)
/// from (start, t0) to t1 (either direction). Near the vortex the step is
/// additionally capped at 0.1 * rho^2 so the 1/rho speed is resolved with a
/// bounded angular advance per step. Entering vortex_cutoff terminates the
/// trajectory with VortexCapture; exceeding max_steps (or a step-size
/// underflow) with StepLimit.
Trajectory integrate_trajectory(const VelocityField& field, PlanePoint start, double t0,
                                double t1, const IntegratorSettings& settings = {},
                                const StepObserver& observer = {});

/// Endpoint of the flow map; throws VortexCaptureError on capture and
/// NoConvergenceError on a step limit.
PlanePoint flow_point(const VelocityField& field, PlanePoint start, double t0, double t1,
                      const IntegratorSettings& settings = {});

/// Stroboscopic samples of one seed family: positions at t = n*T0,
/// n = 0..periods, stopping early on capture.
struct SeedSection {
    PlanePoint seed;
    std::vector<PlanePoint> points;
    TerminationStatus status = TerminationStatus::Completed;
};

struct SectionDataset {
    double period = 0.0;
    std::vector<SeedSection> seeds;
};

/// Computes the stroboscopic section for every seed. Seeds are independent
/// and run in parallel (n_threads = 0 picks the hardware concurrency).
SectionDataset stroboscopic_section(const VelocityField& field,
                                    const std::vector<PlanePoint>& seeds, int periods,
                                    const IntegratorSettings& settings = {}, int n_threads = 0);

/// Image of a point under the time-T0 flow started at t = 0.
PlanePoint period_map(const VelocityField& field, PlanePoint point,
                      const IntegratorSettings& settings = {});

/// Preimage: the time-T0 flow run backwards (t = T0 down to 0), which by
/// field periodicity is the exact inverse of period_map.
PlanePoint period_map_inverse(const VelocityField& field, PlanePoint point,
                              const IntegratorSettings& settings = {});

struct WindingResult {
    PlanePoint image;
    double delta_theta;  // continuous angle advance about the moving vortex
};

/// period_map plus the unwound polar-angle advance of the trajectory about
/// the instantaneous vortex position (origin for fields without a vortex
/// track). The per-step advance is far below pi, so accumulation over dense
/// substeps unwinds the angle without ambiguity.
WindingResult period_map_with_winding(const VelocityField& field, PlanePoint point,
                                      const IntegratorSettings& settings = {});

/// Central finite-difference Jacobian of period_map. Integration tolerances
/// are tightened to rel 1e-12 / abs 1e-13 so the difference quotient is not
/// noise-limited at the default fd_step.
Mat2 period_map_jacobian(const VelocityField& field, PlanePoint point, double fd_step = 1e-6,
                         const IntegratorSettings& settings = {});

}  // namespace bohm
