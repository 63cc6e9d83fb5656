#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidloc/estimators.hpp"
#include "rigidloc/geometry.hpp"

namespace rigidloc {

enum class AnchorMode {
  kPerTrial,  // fresh anchor deployment in every trial
  kFixed,     // one deployment shared by every trial
};

std::string_view to_string(AnchorMode mode);

/// Axis-aligned box the anchors are drawn uniformly from.
struct AnchorRegion {
  Eigen::Vector3d lower = Eigen::Vector3d::Zero();
  Eigen::Vector3d upper = Eigen::Vector3d::Constant(100.0);
};

/// The six-sensor pyramid used throughout the evaluation, in meters.
Topology default_topology();

struct ExperimentConfig {
  Topology topology = default_topology();
  int anchor_count = 10;
  AnchorRegion anchor_region;
  EulerAngles truth_euler{20.0, -25.0, 10.0};
  Eigen::Vector3d truth_translation = Eigen::Vector3d::Constant(5.0);
  std::vector<double> reference_range_db_sweep{20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
  int n_exp = 1000;
  double perturbation_std = 0.0;  // meters
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{Method::kLS, Method::kCLS, Method::kCTLS};
  AnchorMode anchor_mode = AnchorMode::kPerTrial;
  bool per_sensor_noise = false;
  bool proper_rotation = false;
  LsSolvePath ls_path = LsSolvePath::kMatrix;

  /// Throws InvalidArgument on the first violated constraint.
  void validate() const;
  Pose truth() const;
  bool uses_constrained_estimator() const;
};

/// Parses the flat key/value config format (YAML mapping; matrices as
/// row-major nested lists). Unknown keys are rejected; missing keys keep
/// their defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Serializes a config back to the same format.
std::string dump_config(const ExperimentConfig& config);

}  // namespace rigidloc
