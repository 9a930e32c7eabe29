#include "bohm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bohm/parallel.hpp"

namespace bohm {

const char* to_string(TerminationStatus status) {
    switch (status) {
        case TerminationStatus::Completed: return "completed";
        case TerminationStatus::VortexCapture: return "vortex_capture";
        case TerminationStatus::StepLimit: return "step_limit";
    }
    return "unknown";
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (Hairer & Wanner's continuous extension).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct StepOutcome {
    TerminationStatus status;
    PlanePoint y;
    double t;
};

double error_norm(PlaneVector err, PlanePoint y0, PlanePoint y1,
                  const IntegratorSettings& s) {
    const double scx = s.abs_tol + s.rel_tol * std::max(std::abs(y0.x), std::abs(y1.x));
    const double scy = s.abs_tol + s.rel_tol * std::max(std::abs(y0.y), std::abs(y1.y));
    const double ex = err.vx / scx;
    const double ey = err.vy / scy;
    return std::sqrt(0.5 * (ex * ex + ey * ey));
}

class Dopri5 {
public:
    Dopri5(const VelocityField& field, const IntegratorSettings& settings)
        : field_(field), settings_(settings) {}

    // Runs from (y, t0) to t1, invoking the observer on each accepted step.
    StepOutcome run(PlanePoint y, double t0, double t1, const StepObserver& observe) {
        const double dir = (t1 >= t0) ? 1.0 : -1.0;
        double t = t0;
        if (t1 == t0) return {TerminationStatus::Completed, y, t};

        PlaneVector k1;
        if (!eval(y, t, k1)) return {TerminationStatus::VortexCapture, y, t};
        if (captured(y, t)) return {TerminationStatus::VortexCapture, y, t};

        double h = dir * initial_step(y, t, k1, std::abs(t1 - t0));
        double facold = 1e-4;
        bool last_rejected = false;

        for (std::int64_t step = 0; step < settings_.max_steps; ++step) {
            h = dir * std::min(std::abs(h), step_cap(y, t));
            bool last = false;
            if ((t + h - t1) * dir >= 0.0) {
                h = t1 - t;
                last = true;
            }
            if (!last && std::abs(h) < settings_.min_step)
                return {TerminationStatus::StepLimit, y, t};

            PlaneVector k2, k3, k4, k5, k6, k7;
            PlanePoint y1;
            bool ok =
                eval({y.x + h * a21 * k1.vx, y.y + h * a21 * k1.vy}, t + c2 * h, k2) &&
                eval({y.x + h * (a31 * k1.vx + a32 * k2.vx),
                      y.y + h * (a31 * k1.vy + a32 * k2.vy)},
                     t + c3 * h, k3) &&
                eval({y.x + h * (a41 * k1.vx + a42 * k2.vx + a43 * k3.vx),
                      y.y + h * (a41 * k1.vy + a42 * k2.vy + a43 * k3.vy)},
                     t + c4 * h, k4) &&
                eval({y.x + h * (a51 * k1.vx + a52 * k2.vx + a53 * k3.vx + a54 * k4.vx),
                      y.y + h * (a51 * k1.vy + a52 * k2.vy + a53 * k3.vy + a54 * k4.vy)},
                     t + c5 * h, k5) &&
                eval({y.x + h * (a61 * k1.vx + a62 * k2.vx + a63 * k3.vx + a64 * k4.vx +
                                 a65 * k5.vx),
                      y.y + h * (a61 * k1.vy + a62 * k2.vy + a63 * k3.vy + a64 * k4.vy +
                                 a65 * k5.vy)},
                     t + h, k6);
            if (ok) {
                y1 = {y.x + h * (a71 * k1.vx + a73 * k3.vx + a74 * k4.vx + a75 * k5.vx +
                                 a76 * k6.vx),
                      y.y + h * (a71 * k1.vy + a73 * k3.vy + a74 * k4.vy + a75 * k5.vy +
                                 a76 * k6.vy)};
                ok = eval(y1, t + h, k7);
            }
            if (!ok) return {TerminationStatus::VortexCapture, y, t};

            const PlaneVector err = {
                h * (e1 * k1.vx + e3 * k3.vx + e4 * k4.vx + e5 * k5.vx + e6 * k6.vx +
                     e7 * k7.vx),
                h * (e1 * k1.vy + e3 * k3.vy + e4 * k4.vy + e5 * k5.vy + e6 * k6.vy +
                     e7 * k7.vy)};
            const double err_norm_value = error_norm(err, y, y1, settings_);

            // PI controller, beta = 0.04.
            const double expo1 = 0.2 - 0.04 * 0.75;
            const double fac11 = std::pow(std::max(err_norm_value, 1e-30), expo1);
            if (err_norm_value <= 1.0) {
                const double fac_prev = std::pow(facold, 0.04);
                facold = std::max(err_norm_value, 1e-4);
                if (observe) observe(make_dense(t, h, y, y1, k1, k3, k4, k5, k6, k7));
                t += h;
                y = y1;
                k1 = k7;
                if (captured(y, t)) return {TerminationStatus::VortexCapture, y, t};
                if (last) return {TerminationStatus::Completed, y, t1};
                double fac = fac11 / fac_prev;
                fac = std::max(0.1, std::min(5.0, fac / 0.9));
                double h_new = std::abs(h) / fac;
                if (last_rejected) h_new = std::min(h_new, std::abs(h));
                last_rejected = false;
                h = dir * std::min(h_new, settings_.max_step);
            } else {
                last_rejected = true;
                h = dir * (std::abs(h) / std::min(5.0, fac11 / 0.9));
            }
        }
        return {TerminationStatus::StepLimit, y, t};
    }

private:
    bool eval(PlanePoint p, double t, PlaneVector& out) {
        try {
            out = field_.velocity(p.x, p.y, t);
        } catch (const VortexProximityError&) {
            return false;
        }
        return std::isfinite(out.vx) && std::isfinite(out.vy);
    }

    bool captured(PlanePoint p, double t) const {
        const auto rv = field_.vortex(t);
        return rv && distance(p, *rv) < settings_.vortex_cutoff;
    }

    // Cap h so the angular advance around the nearby node stays ~0.1 rad.
    double step_cap(PlanePoint p, double t) const {
        double cap = settings_.max_step;
        const auto rv = field_.vortex(t);
        if (rv) {
            const double rho = distance(p, *rv);
            cap = std::min(cap, std::max(0.1 * rho * rho, settings_.min_step));
        }
        return cap;
    }

    double initial_step(PlanePoint y, double t, PlaneVector f0, double span) const {
        const double sc = settings_.abs_tol + settings_.rel_tol * norm({y.x, y.y});
        const double d0 = norm({y.x, y.y}) / sc;
        const double d1 = norm(f0) / sc;
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, span, settings_.max_step, step_cap(y, t)});
        return std::max(h0, settings_.min_step);
    }

    DenseStep make_dense(double t, double h, PlanePoint y0, PlanePoint y1, PlaneVector k1,
                         PlaneVector k3, PlaneVector k4, PlaneVector k5, PlaneVector k6,
                         PlaneVector k7) const {
        double rc[10];
        const double dx = y1.x - y0.x;
        const double dy = y1.y - y0.y;
        rc[0] = y0.x;
        rc[1] = dx;
        rc[2] = h * k1.vx - dx;
        rc[3] = dx - h * k7.vx - rc[2];
        rc[4] = h * (d1 * k1.vx + d3 * k3.vx + d4 * k4.vx + d5 * k5.vx + d6 * k6.vx +
                     d7 * k7.vx);
        rc[5] = y0.y;
        rc[6] = dy;
        rc[7] = h * k1.vy - dy;
        rc[8] = dy - h * k7.vy - rc[7];
        rc[9] = h * (d1 * k1.vy + d3 * k3.vy + d4 * k4.vy + d5 * k5.vy + d6 * k6.vy +
                     d7 * k7.vy);
        return DenseStep(t, h, y0, y1, rc);
    }

    const VelocityField& field_;
    IntegratorSettings settings_;
};

}  // namespace

PlanePoint DenseStep::at(double t) const {
    const double theta = (t - t0_) / h_;
    const double om = 1.0 - theta;
    auto horner = [&](const double* r) {
        return r[0] + theta * (r[1] + om * (r[2] + theta * (r[3] + om * r[4])));
    };
    return {horner(rcont_), horner(rcont_ + 5)};
}

Trajectory integrate_trajectory(const VelocityField& field, PlanePoint start, double t0,
                                double t1, const IntegratorSettings& settings,
                                const StepObserver& observer) {
    Trajectory traj;
    traj.samples.push_back({t0, start});
    auto record = [&](const DenseStep& s) {
        traj.samples.push_back({s.t_end(), s.end()});
        if (observer) observer(s);
    };
    Dopri5 stepper(field, settings);
    const StepOutcome out = stepper.run(start, t0, t1, record);
    traj.status = out.status;
    auto& back = traj.samples.back();
    if (std::abs(out.t - back.t) <= 1e-14 * std::max(1.0, std::abs(out.t)))
        back = {out.t, out.y};
    else
        traj.samples.push_back({out.t, out.y});
    return traj;
}

PlanePoint flow_point(const VelocityField& field, PlanePoint start, double t0, double t1,
                      const IntegratorSettings& settings) {
    Dopri5 stepper(field, settings);
    const StepOutcome out = stepper.run(start, t0, t1, {});
    if (out.status == TerminationStatus::VortexCapture)
        throw VortexCaptureError(out.y, out.t);
    if (out.status == TerminationStatus::StepLimit)
        throw NoConvergenceError("flow stopped: step limit or step-size underflow");
    return out.y;
}

SectionDataset stroboscopic_section(const VelocityField& field,
                                    const std::vector<PlanePoint>& seeds, int periods,
                                    const IntegratorSettings& settings, int n_threads) {
    SectionDataset data;
    data.period = field.period();
    data.seeds.resize(seeds.size());
    const double t0 = field.period();

    parallel_for(seeds.size(), n_threads, [&](std::size_t i) {
        SeedSection sec;
        sec.seed = seeds[i];
        sec.points.push_back(seeds[i]);
        sec.status = TerminationStatus::Completed;
        Dopri5 stepper(field, settings);
        PlanePoint p = seeds[i];
        for (int n = 0; n < periods; ++n) {
            const StepOutcome out = stepper.run(p, n * t0, (n + 1) * t0, {});
            if (out.status != TerminationStatus::Completed) {
                sec.status = out.status;
                break;
            }
            p = out.y;
            sec.points.push_back(p);
        }
        data.seeds[i] = std::move(sec);
    });
    return data;
}

PlanePoint period_map(const VelocityField& field, PlanePoint point,
                      const IntegratorSettings& settings) {
    return flow_point(field, point, 0.0, field.period(), settings);
}

PlanePoint period_map_inverse(const VelocityField& field, PlanePoint point,
                              const IntegratorSettings& settings) {
    return flow_point(field, point, field.period(), 0.0, settings);
}

WindingResult period_map_with_winding(const VelocityField& field, PlanePoint point,
                                      const IntegratorSettings& settings) {
    double accumulated = 0.0;
    auto center = [&](double t) -> PlanePoint {
        const auto rv = field.vortex(t);
        return rv ? *rv : PlanePoint{0.0, 0.0};
    };
    PlanePoint prev = point;
    double prev_t = 0.0;
    auto angle_of = [&](PlanePoint p, double t) {
        const PlanePoint c = center(t);
        return std::atan2(p.y - c.y, p.x - c.x);
    };
    auto wrap = [](double a) {
        while (a > kPi) a -= kTwoPi;
        while (a < -kPi) a += kTwoPi;
        return a;
    };
    StepObserver track = [&](const DenseStep& s) {
        // Two substeps keep each increment well below pi even for fast turns.
        const double tm = 0.5 * (s.t_begin() + s.t_end());
        const PlanePoint mid = s.at(tm);
        accumulated += wrap(angle_of(mid, tm) - angle_of(prev, prev_t));
        accumulated += wrap(angle_of(s.end(), s.t_end()) - angle_of(mid, tm));
        prev = s.end();
        prev_t = s.t_end();
    };
    Dopri5 stepper(field, settings);
    const StepOutcome out = stepper.run(point, 0.0, field.period(), track);
    if (out.status == TerminationStatus::VortexCapture)
        throw VortexCaptureError(out.y, out.t);
    if (out.status == TerminationStatus::StepLimit)
        throw NoConvergenceError("winding map stopped: step limit");
    return {out.y, accumulated};
}

Mat2 period_map_jacobian(const VelocityField& field, PlanePoint point, double fd_step,
                         const IntegratorSettings& settings) {
    IntegratorSettings tight = settings;
    tight.rel_tol = std::min(tight.rel_tol, 1e-12);
    tight.abs_tol = std::min(tight.abs_tol, 1e-13);
    const double h = fd_step;
    const PlanePoint xp = period_map(field, {point.x + h, point.y}, tight);
    const PlanePoint xm = period_map(field, {point.x - h, point.y}, tight);
    const PlanePoint yp = period_map(field, {point.x, point.y + h}, tight);
    const PlanePoint ym = period_map(field, {point.x, point.y - h}, tight);
    return {(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
            (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)};
}

}  // namespace bohm
