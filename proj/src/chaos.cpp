#include "bohm/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <map>
#include <optional>

#include "bohm/parallel.hpp"

namespace bohm {

const char* to_string(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::Saddle: return "saddle";
        case FixedPointClass::Elliptic: return "elliptic";
        case FixedPointClass::Parabolic: return "parabolic";
    }
    return "unknown";
}

const char* to_string(ManifoldSide side) {
    return side == ManifoldSide::Stable ? "stable" : "unstable";
}

const char* to_string(BranchSign sign) { return sign == BranchSign::Plus ? "plus" : "minus"; }

namespace {

Mat2 fd_jacobian(const PlaneMap& map, PlanePoint p, double h) {
    const PlanePoint xp = map({p.x + h, p.y});
    const PlanePoint xm = map({p.x - h, p.y});
    const PlanePoint yp = map({p.x, p.y + h});
    const PlanePoint ym = map({p.x, p.y - h});
    return {(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
            (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)};
}

void spectral_data(FixedPointRecord& rec, double parabolic_tol) {
    const Mat2& j = rec.jacobian;
    const double tr = j.trace();
    const double det = j.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        double l1 = 0.5 * (tr + root);
        double l2 = 0.5 * (tr - root);
        if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
        rec.eigenvalues[0] = l1;
        rec.eigenvalues[1] = l2;
        for (int i = 0; i < 2; ++i) {
            const double l = rec.eigenvalues[i].real();
            // Pick the better conditioned row of (J - l I) to null out.
            PlaneVector v{j.a12, l - j.a11};
            const PlaneVector w{l - j.a22, j.a21};
            if (norm(w) > norm(v)) v = w;
            const double n = norm(v);
            rec.eigenvectors[i] = n > 0.0 ? (1.0 / n) * v
                                          : PlaneVector{i == 0 ? 1.0 : 0.0, i == 0 ? 0.0 : 1.0};
        }
    } else {
        const double root = std::sqrt(-disc);
        rec.eigenvalues[0] = {0.5 * tr, 0.5 * root};
        rec.eigenvalues[1] = {0.5 * tr, -0.5 * root};
        rec.eigenvectors[0] = {1.0, 0.0};
        rec.eigenvectors[1] = {0.0, 1.0};
    }
    if (std::abs(std::abs(tr) - 2.0) <= parabolic_tol)
        rec.classification = FixedPointClass::Parabolic;
    else if (std::abs(tr) > 2.0)
        rec.classification = FixedPointClass::Saddle;
    else
        rec.classification = FixedPointClass::Elliptic;
}

// Newton step from (J - I) s = -F; minimum-norm least squares when J - I is
// nearly rank deficient (a whole curve of fixed points leaves a null
// direction that a plain solve would blow up along).
PlaneVector newton_step(const Mat2& j_minus_i, PlaneVector f) {
    const double det = j_minus_i.det();
    const double scale = j_minus_i.a11 * j_minus_i.a11 + j_minus_i.a12 * j_minus_i.a12 +
                         j_minus_i.a21 * j_minus_i.a21 + j_minus_i.a22 * j_minus_i.a22;
    if (std::abs(det) < 1e-14) throw SingularJacobianError("det(J - I) below 1e-14");
    if (std::abs(det) < 1e-8 * scale) {
        const Mat2& m = j_minus_i;
        const Mat2 mtm{m.a11 * m.a11 + m.a21 * m.a21, m.a11 * m.a12 + m.a21 * m.a22,
                       m.a11 * m.a12 + m.a21 * m.a22, m.a12 * m.a12 + m.a22 * m.a22};
        const double mu = 1e-12 * scale;
        const Mat2 reg{mtm.a11 + mu, mtm.a12, mtm.a21, mtm.a22 + mu};
        const PlaneVector mtf{m.a11 * f.vx + m.a21 * f.vy, m.a12 * f.vx + m.a22 * f.vy};
        return solve(reg, {-mtf.vx, -mtf.vy});
    }
    return solve(j_minus_i, {-f.vx, -f.vy});
}

}  // namespace

FixedPointRecord find_fixed_point(const PlaneMap& map, PlanePoint guess,
                                  const NewtonOptions& options) {
    PlanePoint p = guess;
    PlaneVector f = map(p) - p;
    double fnorm = norm(f);
    for (int iter = 0; iter < options.max_iter; ++iter) {
        if (fnorm < options.tol) {
            FixedPointRecord rec;
            rec.location = p;
            rec.residual = fnorm;
            rec.jacobian = fd_jacobian(map, p, options.fd_step);
            spectral_data(rec, options.parabolic_tol);
            return rec;
        }
        const Mat2 j = fd_jacobian(map, p, options.fd_step);
        const Mat2 j_minus_i{j.a11 - 1.0, j.a12, j.a21, j.a22 - 1.0};
        const PlaneVector step = newton_step(j_minus_i, f);

        double alpha = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 8; ++halving, alpha *= 0.5) {
            const PlanePoint cand{p.x + alpha * step.vx, p.y + alpha * step.vy};
            PlaneVector fc;
            try {
                fc = map(cand) - cand;
            } catch (const VortexCaptureError&) {
                continue;  // stepped into the capture region; shorten
            }
            if (norm(fc) < fnorm) {
                p = cand;
                f = fc;
                fnorm = norm(fc);
                improved = true;
                break;
            }
        }
        if (!improved)
            throw NoConvergenceError("newton stalled at residual " + std::to_string(fnorm));
    }
    throw NoConvergenceError("newton did not reach tolerance in " +
                             std::to_string(options.max_iter) + " iterations");
}

FixedPointRecord find_fixed_point(const VelocityField& field, PlanePoint guess,
                                  const NewtonOptions& options,
                                  const IntegratorSettings& settings) {
    IntegratorSettings tight = settings;
    tight.rel_tol = std::min(tight.rel_tol, 1e-12);
    tight.abs_tol = std::min(tight.abs_tol, 1e-13);
    PlaneMap map = [&field, tight](PlanePoint p) { return period_map(field, p, tight); };
    return find_fixed_point(map, guess, options);
}

std::vector<FixedPointRecord> search_fixed_points(const VelocityField& field, int grid_n,
                                                  PlanePoint lo, PlanePoint hi,
                                                  const NewtonOptions& options,
                                                  const IntegratorSettings& settings,
                                                  int n_threads) {
    std::vector<PlanePoint> guesses;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j)
            guesses.push_back({lo.x + (hi.x - lo.x) * (i + 0.5) / grid_n,
                               lo.y + (hi.y - lo.y) * (j + 0.5) / grid_n});

    std::vector<std::optional<FixedPointRecord>> found(guesses.size());
    parallel_for(guesses.size(), n_threads, [&](std::size_t i) {
        try {
            found[i] = find_fixed_point(field, guesses[i], options, settings);
        } catch (const std::runtime_error&) {
            // non-converging guess: skip
        }
    });

    std::vector<FixedPointRecord> unique;
    for (const auto& rec : found) {
        if (!rec) continue;
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
            return distance(u.location, rec->location) < 1e-6;
        });
        if (!dup) unique.push_back(*rec);
    }
    return unique;
}

namespace {

// One parameter value tau of the fundamental segment, with the chain of its
// forward images computed so far. dead_from marks the first iterate lost to
// vortex capture.
struct TauChain {
    std::vector<PlanePoint> images;  // images[k] = map^k(seed(tau))
    int dead_from = -1;
};

struct ManifoldNode {
    double u = 0.0;  // global parameter: level + tau
    int level = 0;
    double tau = 0.0;
    PlanePoint point;
    bool ok = true;
};

}  // namespace

ManifoldPolyline trace_manifold_map(const PlaneMap& map, PlanePoint fixed_point,
                                    PlaneVector direction, double multiplier,
                                    ManifoldSide side, BranchSign sign,
                                    const ManifoldParams& params) {
    if (multiplier <= 1.0)
        throw std::invalid_argument("manifold tracing needs a stretching multiplier > 1");
    const double dn = norm(direction);
    if (dn == 0.0) throw std::invalid_argument("manifold direction must be nonzero");
    const double orient = (sign == BranchSign::Plus) ? 1.0 : -1.0;
    const PlaneVector unit = (orient / dn) * direction;

    const PlanePoint p0 = fixed_point + params.seed_delta * unit;
    std::map<double, TauChain> chains;

    // Seed segment [p0, map(p0)] parameterized by tau in [0, 1]; the global
    // parameter u = level + tau walks the branch outward level by level.
    PlanePoint p1;
    try {
        p1 = map(p0);
    } catch (const VortexCaptureError&) {
        ManifoldPolyline out;
        out.side = side;
        out.sign = sign;
        out.fixed_point = fixed_point;
        out.seed_delta = params.seed_delta;
        out.points = {p0};
        return out;
    }
    auto seed_point = [&](double tau) -> PlanePoint {
        return {p0.x + tau * (p1.x - p0.x), p0.y + tau * (p1.y - p0.y)};
    };

    auto point_at = [&](int level, double tau, PlanePoint& out) -> bool {
        TauChain& chain = chains[tau];
        if (chain.images.empty()) chain.images.push_back(seed_point(tau));
        while (static_cast<int>(chain.images.size()) <= level) {
            if (chain.dead_from >= 0) return false;
            try {
                chain.images.push_back(map(chain.images.back()));
            } catch (const VortexCaptureError&) {
                chain.dead_from = static_cast<int>(chain.images.size());
                return false;
            }
        }
        if (chain.dead_from >= 0 && level >= chain.dead_from) return false;
        out = chain.images[static_cast<std::size_t>(level)];
        return true;
    };

    std::list<ManifoldNode> nodes;
    auto make_node = [&](int level, double tau) {
        ManifoldNode n;
        n.level = level;
        n.tau = tau;
        n.u = level + tau;
        n.ok = point_at(level, tau, n.point);
        return n;
    };
    nodes.push_back(make_node(0, 0.0));
    nodes.push_back(make_node(1, 0.0));  // == map(p0), seam of levels 0 and 1

    const double min_dtau = std::ldexp(1.0, -params.max_refine_depth);
    double arc = 0.0;

    auto recompute_arc = [&]() {
        arc = 0.0;
        auto it = nodes.begin();
        auto prev = it++;
        for (; it != nodes.end(); prev = it++)
            if (prev->ok && it->ok) arc += distance(prev->point, it->point);
    };

    while (true) {
        // Refine until every consecutive ok-pair is within max_spacing.
        bool inserted = true;
        while (inserted && nodes.size() < params.max_points) {
            inserted = false;
            auto it = nodes.begin();
            auto prev = it++;
            for (; it != nodes.end(); prev = it++) {
                if (!prev->ok || !it->ok) continue;
                if (distance(prev->point, it->point) <= params.max_spacing) continue;
                if (it->u - prev->u <= min_dtau) continue;
                const double um = 0.5 * (prev->u + it->u);
                const int level = static_cast<int>(std::floor(um));
                nodes.insert(it, make_node(level, um - level));
                inserted = true;
                --it;  // continue from the midpoint; the first half waits for the next pass
            }
        }
        recompute_arc();
        if (arc >= params.max_arclength || nodes.size() >= params.max_points) break;

        // Extend by one more level (the image of the current last segment).
        const int next_level = nodes.back().level + 1;
        if (next_level > 200) break;
        const ManifoldNode tail = make_node(next_level, 0.0);
        nodes.push_back(tail);
        if (!tail.ok) break;  // seam captured; the branch ends in a gap
    }

    // Truncate past max_arclength and emit points with break markers.
    ManifoldPolyline out;
    out.side = side;
    out.sign = sign;
    out.fixed_point = fixed_point;
    out.seed_delta = params.seed_delta;
    double cum = 0.0;
    const ManifoldNode* prev = nullptr;
    for (const auto& n : nodes) {
        if (!n.ok) {
            if (!out.points.empty() &&
                (out.break_after.empty() || out.break_after.back() != out.points.size() - 1))
                out.break_after.push_back(out.points.size() - 1);
            prev = nullptr;
            continue;
        }
        if (prev) cum += distance(prev->point, n.point);
        out.points.push_back(n.point);
        prev = &n;
        if (cum >= params.max_arclength) break;
    }
    out.arc_length = cum;
    return out;
}

ManifoldPolyline trace_manifold(const VelocityField& field, const FixedPointRecord& fp,
                                ManifoldSide side, BranchSign sign,
                                const ManifoldParams& params,
                                const IntegratorSettings& settings) {
    if (fp.classification != FixedPointClass::Saddle)
        throw std::invalid_argument("manifold tracing requires a saddle fixed point");

    IntegratorSettings tight = settings;
    tight.rel_tol = std::min(tight.rel_tol, 1e-12);
    tight.abs_tol = std::min(tight.abs_tol, 1e-13);

    // Unstable branch follows the forward map; the stable branch is the
    // unstable branch of the inverse (backward-time) map.
    const bool unstable = (side == ManifoldSide::Unstable);
    const double lambda = fp.eigenvalues[unstable ? 0 : 1].real();
    const PlaneVector direction = fp.eigenvectors[unstable ? 0 : 1];
    double multiplier = unstable ? std::abs(lambda) : 1.0 / std::abs(lambda);

    PlaneMap step = unstable
                        ? PlaneMap([&field, tight](PlanePoint p) {
                              return period_map(field, p, tight);
                          })
                        : PlaneMap([&field, tight](PlanePoint p) {
                              return period_map_inverse(field, p, tight);
                          });
    if (lambda < 0.0) {  // orientation-reversing saddle: iterate the doubled map
        PlaneMap once = step;
        step = [once](PlanePoint p) { return once(once(p)); };
        multiplier *= multiplier;
    }
    return trace_manifold_map(step, fp.location, direction, multiplier, side, sign, params);
}

namespace {

struct Segment {
    PlanePoint a, b;
    std::size_t index;
    double min_x, max_x, min_y, max_y;
};

std::vector<Segment> polyline_segments(const ManifoldPolyline& poly) {
    std::vector<Segment> segs;
    if (poly.points.size() < 2) return segs;
    std::size_t next_break = 0;
    for (std::size_t i = 0; i + 1 < poly.points.size(); ++i) {
        while (next_break < poly.break_after.size() && poly.break_after[next_break] < i)
            ++next_break;
        if (next_break < poly.break_after.size() && poly.break_after[next_break] == i)
            continue;  // chain interrupted between i and i+1
        Segment s;
        s.a = poly.points[i];
        s.b = poly.points[i + 1];
        s.index = i;
        s.min_x = std::min(s.a.x, s.b.x);
        s.max_x = std::max(s.a.x, s.b.x);
        s.min_y = std::min(s.a.y, s.b.y);
        s.max_y = std::max(s.a.y, s.b.y);
        segs.push_back(s);
    }
    return segs;
}

}  // namespace

std::vector<HomoclinicCrossing> detect_homoclinic(const ManifoldPolyline& stable,
                                                  const ManifoldPolyline& unstable,
                                                  double transversality_tol) {
    if (distance(stable.fixed_point, unstable.fixed_point) > 1e-6)
        throw std::invalid_argument("manifold polylines stem from different fixed points");
    const double exclusion =
        5.0 * std::max(stable.seed_delta, unstable.seed_delta);
    const PlanePoint fp = stable.fixed_point;

    const auto ss = polyline_segments(stable);
    const auto us = polyline_segments(unstable);
    std::vector<HomoclinicCrossing> crossings;
    for (const auto& s : ss) {
        for (const auto& u : us) {
            if (s.min_x > u.max_x || u.min_x > s.max_x || s.min_y > u.max_y ||
                u.min_y > s.max_y)
                continue;
            const PlaneVector r = s.b - s.a;
            const PlaneVector q = u.b - u.a;
            const double denom = cross(r, q);
            if (denom == 0.0) continue;
            const PlaneVector d = u.a - s.a;
            const double t = cross(d, q) / denom;
            const double v = cross(d, r) / denom;
            if (t < 0.0 || t > 1.0 || v < 0.0 || v > 1.0) continue;
            const PlanePoint hit{s.a.x + t * r.vx, s.a.y + t * r.vy};
            if (distance(hit, fp) < exclusion) continue;
            const double angle =
                std::atan2(std::abs(denom), std::abs(dot(r, q)));
            if (angle <= transversality_tol) continue;
            crossings.push_back({hit, angle, s.index, u.index});
        }
    }
    return crossings;
}

LyapunovResult lyapunov_exponent(const VelocityField& field, PlanePoint seed,
                                 double total_time, double renorm_interval,
                                 const IntegratorSettings& settings) {
    constexpr double kSeparation = 1e-9;
    constexpr double kOffsetAngle = 0.78539816339744831;  // fixed, keeps runs deterministic

    LyapunovResult result;
    PlanePoint main = seed;
    PlanePoint shadow{seed.x + kSeparation * std::cos(kOffsetAngle),
                      seed.y + kSeparation * std::sin(kOffsetAngle)};
    double t = 0.0;
    double sum_log = 0.0;

    while (t < total_time) {
        const double t_next = std::min(t + renorm_interval, total_time);
        try {
            main = flow_point(field, main, t, t_next, settings);
            shadow = flow_point(field, shadow, t, t_next, settings);
        } catch (const std::runtime_error&) {
            result.partial = true;
            break;
        }
        t = t_next;
        const PlaneVector sep = shadow - main;
        double dist = norm(sep);
        if (dist <= 0.0) dist = 1e-300;
        sum_log += std::log(dist / kSeparation);
        const double scale = kSeparation / dist;
        shadow = {main.x + scale * sep.vx, main.y + scale * sep.vy};
        result.history.emplace_back(t, sum_log / t);
    }
    result.time_used = t;
    result.per_unit_time = (t > 0.0) ? sum_log / t : 0.0;
    result.per_period = result.per_unit_time * field.period();
    return result;
}

double rotation_rate_scaling(const PeriodicVortexPath& path, const std::vector<double>& radii,
                             const IntegratorSettings& settings, int n_threads) {
    if (radii.size() < 4)
        throw std::invalid_argument("need at least 4 radii for the scaling fit");
    for (double r : radii)
        if (r <= 0.0 || r > 0.5)
            throw std::invalid_argument("radii must lie in (0, 0.5]");

    const PointVortexField field(path);
    const PlanePoint center = path.at(0.0);
    const int n_angles = 8;

    std::vector<double> mean_abs_deriv(radii.size(), 0.0);
    struct Job {
        std::size_t radius_index;
        double theta;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < radii.size(); ++i)
        for (int j = 0; j < n_angles; ++j)
            jobs.push_back({i, kTwoPi * j / n_angles});

    std::vector<double> derivs(jobs.size(), 0.0);
    parallel_for(jobs.size(), n_threads, [&](std::size_t k) {
        const double r = radii[jobs[k].radius_index];
        const double theta = jobs[k].theta;
        const double h = 1e-3 * r;
        const PlaneVector dir{std::cos(theta), std::sin(theta)};
        const PlanePoint pp = center + (r + h) * dir;
        const PlanePoint pm = center + (r - h) * dir;
        const double wp = period_map_with_winding(field, pp, settings).delta_theta;
        const double wm = period_map_with_winding(field, pm, settings).delta_theta;
        derivs[k] = (wp - wm) / (2.0 * h);
    });
    for (std::size_t k = 0; k < jobs.size(); ++k)
        mean_abs_deriv[jobs[k].radius_index] += std::abs(derivs[k]) / n_angles;

    // Least-squares slope of log|d theta / d r| against log r.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double lx = std::log(radii[i]);
        const double ly = std::log(mean_abs_deriv[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CircleCrossingReport circle_crossing_report(const PeriodicVortexPath& path, double radius,
                                            const IntegratorSettings& settings, int n_points,
                                            int n_threads) {
    const PointVortexField field(path);
    const PlanePoint center = path.at(0.0);

    std::vector<PlanePoint> images(n_points);
    std::vector<bool> valid(n_points, true);
    parallel_for(static_cast<std::size_t>(n_points), n_threads, [&](std::size_t i) {
        const double phi = kTwoPi * static_cast<double>(i) / n_points;
        const PlanePoint p{center.x + radius * std::cos(phi),
                           center.y + radius * std::sin(phi)};
        try {
            images[i] = period_map(field, p, settings);
        } catch (const std::runtime_error&) {
            valid[i] = false;
        }
    });

    std::vector<double> f(n_points, 0.0);
    double max_abs = 0.0;
    for (int i = 0; i < n_points; ++i) {
        if (!valid[i]) continue;
        f[i] = distance(images[i], center) - radius;
        max_abs = std::max(max_abs, std::abs(f[i]));
    }

    CircleCrossingReport report;
    if (max_abs < 1e-8) {
        report.degenerate = true;  // image radii indistinguishable from r
        return report;
    }

    double min_angle = kPi;
    for (int i = 0; i < n_points; ++i) {
        const int j = (i + 1) % n_points;
        if (!valid[i] || !valid[j]) continue;
        if (f[i] == 0.0 || f[i] * f[j] >= 0.0) continue;
        ++report.sign_changes;
        const double s = f[i] / (f[i] - f[j]);
        const PlanePoint hit{images[i].x + s * (images[j].x - images[i].x),
                             images[i].y + s * (images[j].y - images[i].y)};
        const PlaneVector tangent_image = images[j] - images[i];
        const PlaneVector radial = hit - center;
        const PlaneVector tangent_circle{-radial.vy, radial.vx};
        const double angle = std::atan2(std::abs(cross(tangent_image, tangent_circle)),
                                        std::abs(dot(tangent_image, tangent_circle)));
        min_angle = std::min(min_angle, angle);
    }
    report.min_crossing_angle = (report.sign_changes > 0) ? min_angle : 0.0;
    return report;
}

std::vector<StateChaosSummary> scan_transition(const std::vector<SuperpositionState>& states,
                                               const std::vector<PlanePoint>& seeds,
                                               int periods, const ScanOptions& options,
                                               const IntegratorSettings& settings) {
    std::vector<StateChaosSummary> summaries;
    summaries.reserve(states.size());

    for (const auto& state : states) {
        const BohmianField field(state);
        const double total_time = periods * field.period();

        StateChaosSummary summary(state);
        summary.threshold_per_period = options.chaos_threshold_per_period;
        summary.seeds.resize(seeds.size());

        parallel_for(seeds.size(), options.n_threads, [&](std::size_t i) {
            SeedLyapunov entry;
            entry.seed = seeds[i];
            entry.result =
                lyapunov_exponent(field, seeds[i], total_time, field.period(), settings);
            entry.status = entry.result.partial ? TerminationStatus::VortexCapture
                                                : TerminationStatus::Completed;
            summary.seeds[i] = std::move(entry);
        });

        int chaotic = 0;
        int usable = 0;
        double lambda_sum = 0.0;
        for (const auto& entry : summary.seeds) {
            const bool covered =
                entry.result.time_used >= options.min_coverage_fraction * total_time;
            if (!covered) continue;
            ++usable;
            lambda_sum += entry.result.per_period;
            if (entry.result.per_period > options.chaos_threshold_per_period) ++chaotic;
        }
        summary.chaotic_fraction =
            seeds.empty() ? 0.0 : static_cast<double>(chaotic) / static_cast<double>(seeds.size());
        summary.mean_lambda_per_period = usable > 0 ? lambda_sum / usable : 0.0;
        summary.section = stroboscopic_section(field, seeds, periods, settings,
                                               options.n_threads);
        summaries.push_back(std::move(summary));
    }
    return summaries;
}

}  // namespace bohm
