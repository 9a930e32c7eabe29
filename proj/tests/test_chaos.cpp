// Fixed points of the period map, manifold tracing, homoclinic crossings,
// Lyapunov exponents, and the twist-scaling / circle-crossing diagnostics.
//
// Synthetic anchors use the linear saddle (x,y) -> (2x, y/2) where
// everything is known in closed form; field anchors use the stationary
// point vortex (twist map) and the oscillator states of the section study.

#include <doctest.h>

#include <cmath>

#include "bohm/chaos.hpp"
#include "oracles.hpp"

using namespace bohm;

namespace {

const PlaneMap linear_saddle = [](PlanePoint p) { return PlanePoint{2.0 * p.x, 0.5 * p.y}; };
const PlaneMap linear_saddle_inverse = [](PlanePoint p) {
    return PlanePoint{0.5 * p.x, 2.0 * p.y};
};

// Fig. 2(b)-family state: small a/b with the common phases.
const SuperpositionState fig2b = SuperpositionState::from_amplitude_ratio(0.02175, 3.876968,
                                                                          2.684916);

double point_to_polyline(const PlanePoint& p, const std::vector<PlanePoint>& poly) {
    double best = 1e18;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const PlaneVector d = poly[i] - poly[i - 1];
        const PlaneVector w = p - poly[i - 1];
        const double len2 = dot(d, d);
        double u = len2 > 0 ? dot(w, d) / len2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        best = std::min(best,
                        distance(p, {poly[i - 1].x + u * d.vx, poly[i - 1].y + u * d.vy}));
    }
    return best;
}

}  // namespace

TEST_CASE("newton on the linear saddle map") {
    NewtonOptions options;
    options.max_iter = 3;  // linear problem: one exact step
    const FixedPointRecord rec = find_fixed_point(linear_saddle, {0.3, 0.4}, options);
    CHECK(std::abs(rec.location.x) < 1e-10);
    CHECK(std::abs(rec.location.y) < 1e-10);
    CHECK(rec.classification == FixedPointClass::Saddle);
    CHECK(rec.eigenvalues[0].real() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rec.eigenvalues[1].real() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(rec.eigenvectors[0].vx) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(rec.eigenvectors[1].vy) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.residual < options.tol);
}

TEST_CASE("newton failure modes") {
    SUBCASE("translation map has no fixed point and a singular J - I") {
        const PlaneMap shift = [](PlanePoint p) { return PlanePoint{p.x + 1.0, p.y}; };
        CHECK_THROWS_AS(find_fixed_point(shift, {0.4, 0.1}), SingularJacobianError);
    }
    SUBCASE("a guess that already satisfies the tolerance is returned as is") {
        const PlaneMap identity = [](PlanePoint p) { return p; };
        const auto rec = find_fixed_point(identity, {0.4, 0.1});
        CHECK(rec.residual == 0.0);
        CHECK(rec.classification == FixedPointClass::Parabolic);
    }
    SUBCASE("iteration cap raises no-convergence") {
        NewtonOptions options;
        options.max_iter = 1;
        options.tol = 1e-14;
        const PlaneMap twisty = [](PlanePoint p) {
            return PlanePoint{p.y + 0.3 * std::sin(3 * p.x), -p.x + 0.5 * std::cos(p.y)};
        };
        CHECK_THROWS_AS(find_fixed_point(twisty, {2.0, 2.0}, options), NoConvergenceError);
    }
}

TEST_CASE("parabolic circle of fixed points, stationary vortex") {
    // T0/r^2 = 2 pi at r = 1: every point of the unit circle is fixed.
    const PointVortexField still(PeriodicVortexPath::stationary());
    const FixedPointRecord rec = find_fixed_point(still, {1.02, 0.05});
    CHECK(rec.residual < 1e-10);
    CHECK(std::hypot(rec.location.x, rec.location.y) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rec.classification == FixedPointClass::Parabolic);
    CHECK(std::abs(std::abs(rec.jacobian.trace()) - 2.0) < 1e-3);
}

TEST_CASE("oscillator saddle near (0.6, 0.75)") {
    const BohmianField field(fig2b);
    const FixedPointRecord rec = find_fixed_point(field, {0.6, 0.75});
    CHECK(rec.classification == FixedPointClass::Saddle);
    CHECK(distance(rec.location, {0.6, 0.75}) < 0.2);
    CHECK(rec.residual < 1e-9);

    SUBCASE("saddle spectral identity") {
        CHECK(rec.eigenvalues[0].imag() == 0.0);
        CHECK(rec.eigenvalues[1].imag() == 0.0);
        const double l1 = rec.eigenvalues[0].real();
        const double l2 = rec.eigenvalues[1].real();
        CHECK(std::abs(l1 * l2 - 1.0) < 1e-4);
        CHECK(std::abs(l1) > 1.0);
        CHECK(std::abs(l2) < 1.0);
    }
    SUBCASE("the saddle is a genuine period-map fixed point") {
        IntegratorSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-13;
        const PlanePoint image = period_map(field, rec.location, tight);
        CHECK(distance(image, rec.location) < 1e-9);
    }
}

TEST_CASE("grid search finds and deduplicates fixed points") {
    const BohmianField field(fig2b);
    const auto records = search_fixed_points(field, 5, {0.0, 0.0}, {1.2, 1.2});
    REQUIRE(!records.empty());
    int saddles = 0;
    for (const auto& rec : records) {
        CHECK(rec.residual < 1e-9);
        if (rec.classification == FixedPointClass::Saddle) ++saddles;
        for (const auto& other : records)
            if (&rec != &other) CHECK(distance(rec.location, other.location) >= 1e-6);
    }
    CHECK(saddles >= 1);
}

TEST_CASE("manifold tracing on the linear saddle") {
    SUBCASE("unstable branch is the positive x axis") {
        const auto poly = trace_manifold_map(linear_saddle, {0, 0}, {1, 0}, 2.0,
                                             ManifoldSide::Unstable, BranchSign::Plus,
                                             {1e-5, 10.0, 0.05});
        CHECK(poly.arc_length >= 10.0);
        for (const auto& p : poly.points) {
            CHECK(std::abs(p.y) < 1e-9);
            CHECK(p.x > 0.0);
        }
        CHECK(poly.points.front().x == doctest::Approx(1e-5));
        SUBCASE("spacing respects the cap") {
            for (std::size_t i = 1; i < poly.points.size(); ++i)
                CHECK(distance(poly.points[i], poly.points[i - 1]) <= 0.05 * 1.0001);
        }
        SUBCASE("minus branch mirrors it") {
            const auto minus = trace_manifold_map(linear_saddle, {0, 0}, {1, 0}, 2.0,
                                                  ManifoldSide::Unstable, BranchSign::Minus,
                                                  {1e-5, 10.0, 0.05});
            for (const auto& p : minus.points) CHECK(p.x < 0.0);
        }
    }
    SUBCASE("stable branch via the inverse map is the y axis") {
        const auto poly = trace_manifold_map(linear_saddle_inverse, {0, 0}, {0, 1}, 2.0,
                                             ManifoldSide::Stable, BranchSign::Plus,
                                             {1e-5, 10.0, 0.05});
        CHECK(poly.arc_length >= 10.0);
        for (const auto& p : poly.points) CHECK(std::abs(p.x) < 1e-9);
    }
}

TEST_CASE("oscillator saddle manifolds and the homoclinic tangle") {
    const BohmianField field(fig2b);
    const FixedPointRecord saddle = find_fixed_point(field, {0.6, 0.75});
    REQUIRE(saddle.classification == FixedPointClass::Saddle);

    ManifoldParams params;
    params.max_arclength = 3.0;
    params.max_spacing = 0.02;

    const auto unstable = trace_manifold(field, saddle, ManifoldSide::Unstable,
                                         BranchSign::Plus, params);
    const auto unstable_minus = trace_manifold(field, saddle, ManifoldSide::Unstable,
                                               BranchSign::Minus, params);
    const auto stable = trace_manifold(field, saddle, ManifoldSide::Stable, BranchSign::Plus,
                                       params);

    SUBCASE("branches reach the requested arclength without collapse") {
        CHECK(unstable.arc_length >= 3.0);
        CHECK(stable.arc_length >= 3.0);
        CHECK(unstable.points.size() >= 150);
        CHECK(stable.points.size() >= 150);
    }
    SUBCASE("first point sits at seed_delta from the saddle") {
        CHECK(distance(unstable.points.front(), saddle.location) ==
              doctest::Approx(params.seed_delta).epsilon(1e-6));
    }
    SUBCASE("invariance: the image of the polyline stays on the polyline") {
        // Only points whose images remain inside the traced arclength can be
        // checked; with stretch ~3.2 per period the first quarter is safe.
        IntegratorSettings tight;
        tight.rel_tol = 1e-12;
        tight.abs_tol = 1e-13;
        double cum = 0.0;
        int checked = 0;
        for (std::size_t i = 1; i < unstable.points.size() &&
                                cum < unstable.arc_length / 4;
             ++i) {
            cum += distance(unstable.points[i], unstable.points[i - 1]);
            if (i % 11 != 0) continue;
            const PlanePoint image = period_map(field, unstable.points[i], tight);
            CHECK(point_to_polyline(image, unstable.points) < 2 * params.max_spacing);
            ++checked;
        }
        CHECK(checked >= 3);
    }
    SUBCASE("stable and unstable branches cross transversally") {
        // At this arclength the tangle shows up between the stable-plus and
        // unstable-minus branches; longer traces add crossings to every pair.
        const auto crossings = detect_homoclinic(stable, unstable_minus, 1e-3);
        const auto crossings_plus = detect_homoclinic(stable, unstable, 1e-3);
        CHECK(crossings.size() + crossings_plus.size() >= 1);
        for (const auto& crossing : crossings) {
            CHECK(crossing.angle > 1e-3);
            CHECK(distance(crossing.location, saddle.location) > 5 * params.seed_delta);
        }
    }
}

TEST_CASE("homoclinic detection on synthetic polylines") {
    auto mk = [](std::vector<PlanePoint> pts, ManifoldSide side) {
        ManifoldPolyline poly;
        poly.side = side;
        poly.fixed_point = {10.0, 10.0};  // exclusion ball far from the probes
        poly.seed_delta = 1e-5;
        poly.points = std::move(pts);
        return poly;
    };
    SUBCASE("perpendicular segments cross once at a right angle") {
        const auto stable = mk({{1.0, 0.0}, {1.0, 2.0}}, ManifoldSide::Stable);
        const auto unstable = mk({{0.0, 1.0}, {2.0, 1.0}}, ManifoldSide::Unstable);
        const auto crossings = detect_homoclinic(stable, unstable, 1e-3);
        REQUIRE(crossings.size() == 1);
        CHECK(crossings[0].location.x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(crossings[0].location.y == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(crossings[0].angle == doctest::Approx(oracle::kPi / 2).epsilon(1e-12));
    }
    SUBCASE("parallel polylines do not cross") {
        const auto stable = mk({{0.0, 0.0}, {2.0, 0.0}}, ManifoldSide::Stable);
        const auto unstable = mk({{0.0, 1.0}, {2.0, 1.0}}, ManifoldSide::Unstable);
        CHECK(detect_homoclinic(stable, unstable, 1e-3).empty());
    }
    SUBCASE("crossings inside the exclusion ball are suppressed") {
        auto stable = mk({{1.0, 0.0}, {1.0, 2.0}}, ManifoldSide::Stable);
        auto unstable = mk({{0.0, 1.0}, {2.0, 1.0}}, ManifoldSide::Unstable);
        stable.fixed_point = unstable.fixed_point = {1.0, 1.0};
        stable.seed_delta = unstable.seed_delta = 0.1;  // ball radius 0.5 covers (1,1)
        CHECK(detect_homoclinic(stable, unstable, 1e-3).empty());
    }
    SUBCASE("polylines from different fixed points are rejected") {
        auto stable = mk({{1.0, 0.0}, {1.0, 2.0}}, ManifoldSide::Stable);
        auto unstable = mk({{0.0, 1.0}, {2.0, 1.0}}, ManifoldSide::Unstable);
        unstable.fixed_point = {-3.0, 0.0};
        CHECK_THROWS_AS(detect_homoclinic(stable, unstable, 1e-3), std::invalid_argument);
    }
    SUBCASE("shallow crossings below the tolerance are not reported") {
        const auto stable = mk({{0.0, 0.0}, {2.0, 0.0}}, ManifoldSide::Stable);
        const auto unstable = mk({{0.0, -1e-4}, {2.0, 1e-4}}, ManifoldSide::Unstable);
        CHECK(detect_homoclinic(stable, unstable, 1e-3).empty());
        CHECK(detect_homoclinic(stable, unstable, 1e-5).size() == 1);
    }
}

namespace {

// Autonomous saddle flow whose time-1 map is the linear saddle.
class SaddleFlow final : public VelocityField {
public:
    PlaneVector velocity(double x, double y, double) const override {
        const double rate = std::log(2.0);
        return {rate * x, -rate * y};
    }
    double period() const override { return 1.0; }
    std::optional<PlanePoint> vortex(double) const override { return std::nullopt; }
};

}  // namespace

TEST_CASE("lyapunov exponent of the saddle flow is log 2") {
    // Seeded at the fixed point so the reference trajectory stays bounded
    // and the 1e-9 shadow offset is never lost to rounding.
    const SaddleFlow flow;
    const auto result = lyapunov_exponent(flow, {0.0, 0.0}, 500.0, 1.0);
    CHECK(result.per_unit_time == doctest::Approx(std::log(2.0)).epsilon(1e-3 / std::log(2.0)));
    CHECK(result.per_period == result.per_unit_time);  // period 1
    CHECK(!result.partial);
    CHECK(result.time_used == 500.0);
    CHECK(result.history.size() == 500);
}

TEST_CASE("integrable oscillator exponent decays like log t over t") {
    const auto still = SuperpositionState::from_amplitude_ratio(0.0, 3.876968, 2.684916);
    const BohmianField field(still);
    const auto short_run = lyapunov_exponent(field, {0.8, 0.0}, 100 * field.period(),
                                             field.period());
    const auto long_run = lyapunov_exponent(field, {0.8, 0.0}, 800 * field.period(),
                                            field.period());
    CHECK(short_run.per_unit_time < 2e-2);
    CHECK(long_run.per_unit_time < short_run.per_unit_time / 3);
    CHECK(long_run.per_unit_time < 2e-3);
    CHECK(long_run.per_period == doctest::Approx(long_run.per_unit_time * field.period()));
}

TEST_CASE("chaotic-sea seed has a clearly positive exponent") {
    const auto state = SuperpositionState::from_amplitude_ratio(0.17651, 3.876968, 2.684916);
    const BohmianField field(state);
    const auto result = lyapunov_exponent(field, {0.8, 0.0}, 300 * field.period(),
                                          field.period());
    CHECK(result.per_period > 0.01);

    SUBCASE("doubling the horizon moves the converged exponent by < 20%") {
        // Finite-time exponents of a wandering chaotic orbit need a long
        // base horizon before the doubling test is meaningful.
        const auto base = lyapunov_exponent(field, {0.8, 0.0}, 1500 * field.period(),
                                            field.period());
        const auto longer = lyapunov_exponent(field, {0.8, 0.0}, 3000 * field.period(),
                                              field.period());
        CHECK(std::abs(longer.per_period - base.per_period) <
              0.2 * std::abs(base.per_period));
    }
    SUBCASE("halving the renormalization interval moves it by < 10%") {
        const auto finer = lyapunov_exponent(field, {0.8, 0.0}, 300 * field.period(),
                                             field.period() / 2);
        CHECK(std::abs(finer.per_period - result.per_period) <
              0.1 * std::abs(result.per_period));
    }
}

TEST_CASE("rotation-rate scaling of the twist map") {
    const std::vector<double> radii{0.1, 0.15, 0.2, 0.3, 0.4};
    SUBCASE("stationary vortex slope is -3") {
        const double slope =
            rotation_rate_scaling(PeriodicVortexPath::stationary(), radii);
        CHECK(slope == doctest::Approx(-3.0).epsilon(0.2 / 3.0));
    }
    SUBCASE("small perturbation leaves the slope near -3") {
        const auto path = PeriodicVortexPath::ellipse(0.01, 0.008, 3.876968, 2.684916);
        const double slope = rotation_rate_scaling(path, radii);
        CHECK(std::abs(slope - (-3.0)) < 0.3);
    }
    SUBCASE("angular advance is linear in the period") {
        const auto p1 = PeriodicVortexPath::stationary({0, 0}, 2 * oracle::kPi);
        const auto p2 = PeriodicVortexPath::stationary({0, 0}, 4 * oracle::kPi);
        const PointVortexField f1(p1), f2(p2);
        const double r = 0.3, h = 1e-3 * r;
        auto deriv = [&](const PointVortexField& f) {
            const double wp = period_map_with_winding(f, {r + h, 0.0}).delta_theta;
            const double wm = period_map_with_winding(f, {r - h, 0.0}).delta_theta;
            return (wp - wm) / (2 * h);
        };
        CHECK(deriv(f2) / deriv(f1) == doctest::Approx(2.0).epsilon(0.05));
    }
    SUBCASE("radii outside (0, 0.5] are rejected") {
        CHECK_THROWS_AS(
            rotation_rate_scaling(PeriodicVortexPath::stationary(), {0.1, 0.2, 0.3, 0.7}),
            std::invalid_argument);
        CHECK_THROWS_AS(rotation_rate_scaling(PeriodicVortexPath::stationary(), {0.1, 0.2}),
                        std::invalid_argument);
    }
}

TEST_CASE("circle-image crossing report") {
    SUBCASE("stationary vortex is degenerate") {
        const auto report = circle_crossing_report(PeriodicVortexPath::stationary(), 0.3);
        CHECK(report.degenerate);
        CHECK(report.sign_changes == 0);
    }
    SUBCASE("moving vortex crosses with an even count") {
        const auto state = SuperpositionState::from_amplitude_ratio(0.0553, 3.876968,
                                                                    2.684916);
        const auto path = PeriodicVortexPath::from_state(state);
        for (double r : {0.2, 0.4}) {
            const auto report = circle_crossing_report(path, r);
            CHECK(!report.degenerate);
            CHECK(report.sign_changes >= 2);
            CHECK(report.sign_changes % 2 == 0);
            CHECK(report.min_crossing_angle > 0.0);
        }
    }
}

TEST_CASE("transition scan over the ratio family") {
    const double g1 = 3.876968, g2 = 2.684916;
    const std::vector<SuperpositionState> states{
        SuperpositionState::from_amplitude_ratio(0.0, g1, g2),
        SuperpositionState::from_amplitude_ratio(0.17651, g1, g2)};
    const std::vector<PlanePoint> seeds{{0.8, 0.0}, {0.3, 0.3}, {0.5, -0.6}, {-0.7, 0.5}};

    SUBCASE("empty seed list gives an empty summary") {
        const auto summaries = scan_transition(states, {}, 10);
        REQUIRE(summaries.size() == 2);
        for (const auto& s : summaries) {
            CHECK(s.seeds.empty());
            CHECK(s.chaotic_fraction == 0.0);
        }
    }
    SUBCASE("chaotic fraction switches on with the perturbation") {
        // 2000-period horizon: the integrable-limit estimator bias sits well
        // below the 0.01/period threshold by then.
        const auto summaries = scan_transition(states, seeds, 2000);
        REQUIRE(summaries.size() == 2);
        CHECK(summaries[0].chaotic_fraction == 0.0);
        CHECK(summaries[1].chaotic_fraction > 0.0);
        CHECK(summaries[1].mean_lambda_per_period > summaries[0].mean_lambda_per_period);
        CHECK(summaries[0].section.seeds.size() == seeds.size());
        CHECK(summaries[0].threshold_per_period == 0.01);
    }
}
