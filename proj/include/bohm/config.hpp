#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bohm/integrate.hpp"
#include "bohm/types.hpp"

namespace bohm {

/// Configuration problem; carries the offending key for the CLI message.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error("[" + key + "] " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class ModelKind { Oscillator, PointVortex };
enum class PathKind { Stationary, Ellipse };
enum class SeedKind { Lattice, List };

/// One experiment = one flat key-value file with [section] groups. Parsing
/// and emission round-trip exactly (numbers are written with 17 significant
/// digits), and every numeric field is validated as finite.
struct ExperimentConfig {
    ModelKind model = ModelKind::Oscillator;

    // [state] (oscillator model)
    double a_over_b = 0.0;
    double gamma1 = 3.876968;
    double gamma2 = 2.684916;
    bool b_equals_c = true;
    std::optional<double> amp_a, amp_b, amp_c;  // explicit amplitudes when b != c

    // [path] (point-vortex model)
    PathKind path_kind = PathKind::Stationary;
    double path_amplitude_x = 0.0;
    double path_amplitude_y = 0.0;
    double path_gamma1 = 3.876968;
    double path_gamma2 = 2.684916;
    double path_center_x = 0.0;
    double path_center_y = 0.0;
    double path_period = kTwoPi;

    // [seeds]
    SeedKind seed_kind = SeedKind::Lattice;
    double seed_x_min = -1.2, seed_x_max = 1.2;
    double seed_y_min = -1.2, seed_y_max = 1.2;
    int seed_nx = 20, seed_ny = 20;
    double exclude_vortex_radius = 0.05;
    std::vector<PlanePoint> seed_list;

    // [integrate]
    IntegratorSettings integrate;

    // [section]
    int section_periods = 200;

    // [fixed_point]
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    std::optional<PlanePoint> fixed_point_guess;

    // [manifolds]
    double manifold_seed_delta = 1e-5;
    double manifold_max_arclength = 3.0;
    double manifold_max_spacing = 0.01;
    double transversality_tol = 1e-3;

    // [lyapunov]
    int lyapunov_periods = 500;
    double chaos_threshold_per_period = 0.01;

    // [scan]
    std::vector<double> scan_ratios;
    int scan_periods = 200;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Normalized emission; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_double(double value);

}  // namespace bohm
