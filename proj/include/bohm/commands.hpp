#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bohm/config.hpp"
#include "bohm/velocity.hpp"

namespace bohm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Velocity field described by the config ([experiment].model selects the
/// oscillator state or the point-vortex path).
std::unique_ptr<VelocityField> make_field(const ExperimentConfig& config);

/// Seed set described by [seeds]: explicit list, or the lattice with points
/// within exclude_vortex_radius of the t = 0 vortex dropped.
std::vector<PlanePoint> make_seeds(const ExperimentConfig& config, const VelocityField& field);

// Experiment runners; each writes its files under out_dir and returns an
// exit code (0 ok, 2 config problem, 3 runtime failure).
int cmd_section(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_vortex_path(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_fixed_point(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_manifolds(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_lyapunov(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_scan(const ExperimentConfig& config, const std::string& out_dir, int threads);

}  // namespace bohm
