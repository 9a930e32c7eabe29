#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "bohm/integrate.hpp"
#include "bohm/pointvortex.hpp"
#include "bohm/types.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

using PlaneMap = std::function<PlanePoint(PlanePoint)>;

enum class FixedPointClass { Saddle, Elliptic, Parabolic };

const char* to_string(FixedPointClass c);

/// A converged fixed point of an area-preserving plane map, with its local
/// linearization. For saddles the eigenvalues are real with
/// |lambda1| > 1 > |lambda2| and lambda1*lambda2 = det J = 1.
struct FixedPointRecord {
    PlanePoint location;
    Mat2 jacobian;
    std::complex<double> eigenvalues[2];  // |ev[0]| >= |ev[1]|
    PlaneVector eigenvectors[2];          // unit vectors, valid for real spectrum
    FixedPointClass classification = FixedPointClass::Elliptic;
    double residual = 0.0;  // |map(p) - p| at the reported point
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double fd_step = 1e-6;
    double parabolic_tol = 1e-3;  // |trace| within this of 2 -> Parabolic
};

/// Damped Newton iteration on F(p) = map(p) - p with a central
/// finite-difference Jacobian. Throws NoConvergenceError after max_iter and
/// SingularJacobianError when |det(J - I)| < 1e-14; a nearly rank-deficient
/// J - I (invariant circles of fixed points) falls back to a minimum-norm
/// least-squares step.
FixedPointRecord find_fixed_point(const PlaneMap& map, PlanePoint guess,
                                  const NewtonOptions& options = {});

/// Fixed point of the stroboscopic period map of a field (integration
/// tolerances tightened so Newton is not noise-limited).
FixedPointRecord find_fixed_point(const VelocityField& field, PlanePoint guess,
                                  const NewtonOptions& options = {},
                                  const IntegratorSettings& settings = {});

/// Newton from a grid_n x grid_n lattice of guesses over [lo, hi],
/// deduplicating converged points within 1e-6. Failed guesses are skipped.
std::vector<FixedPointRecord> search_fixed_points(const VelocityField& field, int grid_n = 7,
                                                  PlanePoint lo = {0.0, 0.0},
                                                  PlanePoint hi = {1.2, 1.2},
                                                  const NewtonOptions& options = {},
                                                  const IntegratorSettings& settings = {},
                                                  int n_threads = 0);

enum class ManifoldSide { Stable, Unstable };
enum class BranchSign { Plus, Minus };

const char* to_string(ManifoldSide side);
const char* to_string(BranchSign sign);

/// Ordered polyline approximating one manifold branch. Indices in
/// break_after mark points after which the chain is interrupted (a point was
/// dropped on vortex capture); no segment spans a break.
struct ManifoldPolyline {
    ManifoldSide side = ManifoldSide::Unstable;
    BranchSign sign = BranchSign::Plus;
    PlanePoint fixed_point;
    double seed_delta = 0.0;
    std::vector<PlanePoint> points;
    std::vector<std::size_t> break_after;
    double arc_length = 0.0;
};

struct ManifoldParams {
    double seed_delta = 1e-5;
    double max_arclength = 3.0;
    double max_spacing = 0.01;
    int max_refine_depth = 42;          // dyadic splits of one fundamental segment
    std::size_t max_points = 400000;
};

/// Grows a manifold branch of a saddle by iterating the map on a seed
/// segment [p0, map(p0)], p0 = fp + sign*seed_delta*direction, inserting
/// preimage midpoints until consecutive spacing drops below max_spacing.
/// `multiplier` is the stretching factor (> 1) of `map` along `direction`.
ManifoldPolyline trace_manifold_map(const PlaneMap& map, PlanePoint fixed_point,
                                    PlaneVector direction, double multiplier,
                                    ManifoldSide side, BranchSign sign,
                                    const ManifoldParams& params = {});

/// Manifold branch of a saddle of the period map. The stable branch is
/// traced as the unstable branch of the inverse map (backward-time
/// integration); a negative eigenvalue is handled by tracing the doubled map.
ManifoldPolyline trace_manifold(const VelocityField& field, const FixedPointRecord& fp,
                                ManifoldSide side, BranchSign sign,
                                const ManifoldParams& params = {},
                                const IntegratorSettings& settings = {});

/// Transversal crossing of the stable and unstable polylines.
struct HomoclinicCrossing {
    PlanePoint location;
    double angle = 0.0;  // acute angle between the crossing segments, rad
    std::size_t stable_segment = 0;
    std::size_t unstable_segment = 0;
};

/// All pairwise segment intersections between the two polylines with
/// crossing angle above transversality_tol, excluding a ball of radius
/// 5*seed_delta around the shared fixed point (the trivial intersection).
std::vector<HomoclinicCrossing> detect_homoclinic(const ManifoldPolyline& stable,
                                                  const ManifoldPolyline& unstable,
                                                  double transversality_tol = 1e-3);

/// Largest Lyapunov exponent by the two-trajectory method.
struct LyapunovResult {
    double per_unit_time = 0.0;
    double per_period = 0.0;
    double time_used = 0.0;                            // < requested when partial
    bool partial = false;                              // capture before total_time
    std::vector<std::pair<double, double>> history;    // (t, running exponent)
};

/// Shadow trajectory offset 1e-9 from the seed; log stretch factors averaged
/// over renormalization intervals. Flags a partial result (with the time
/// actually covered) if either trajectory is captured.
LyapunovResult lyapunov_exponent(const VelocityField& field, PlanePoint seed,
                                 double total_time, double renorm_interval,
                                 const IntegratorSettings& settings = {});

/// Log-log slope of the radial derivative of the period map's angular
/// advance, measured at the given radii around path(0) (8 azimuthal
/// directions averaged per radius). The exact stationary-vortex flow gives
/// d(T0/r^2)/dr, slope -3.
double rotation_rate_scaling(const PeriodicVortexPath& path, const std::vector<double>& radii,
                             const IntegratorSettings& settings = {}, int n_threads = 0);

/// How the period-map image of the circle of the given radius around path(0)
/// crosses that circle: sign changes of |R(p)| - r over 512 circle points and
/// the minimum crossing angle. Stationary paths leave circles invariant and
/// report degenerate = true.
struct CircleCrossingReport {
    int sign_changes = 0;
    double min_crossing_angle = 0.0;
    bool degenerate = false;
};

CircleCrossingReport circle_crossing_report(const PeriodicVortexPath& path, double radius,
                                            const IntegratorSettings& settings = {},
                                            int n_points = 512, int n_threads = 0);

/// Per-state chaos summary over a common seed set.
struct SeedLyapunov {
    PlanePoint seed;
    LyapunovResult result;
    TerminationStatus status = TerminationStatus::Completed;
};

struct StateChaosSummary {
    explicit StateChaosSummary(SuperpositionState s) : state(s) {}

    SuperpositionState state;
    double chaotic_fraction = 0.0;        // chaotic seeds / all seeds
    double mean_lambda_per_period = 0.0;  // over seeds with usable coverage
    double threshold_per_period = 0.0;
    std::vector<SeedLyapunov> seeds;
    SectionDataset section;
};

struct ScanOptions {
    double chaos_threshold_per_period = 0.01;
    double min_coverage_fraction = 0.25;  // usable-result cutoff for partials
    int n_threads = 0;
};

/// Lyapunov exponents and stroboscopic sections for a family of states
/// sharing gamma1/gamma2, e.g. the a/b ramp of the transition study.
std::vector<StateChaosSummary> scan_transition(const std::vector<SuperpositionState>& states,
                                               const std::vector<PlanePoint>& seeds,
                                               int periods, const ScanOptions& options = {},
                                               const IntegratorSettings& settings = {});

}  // namespace bohm
