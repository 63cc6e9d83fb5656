#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rigidloc/estimators.hpp"
#include "rigidloc/geometry.hpp"

namespace rigidloc {

/// One Monte-Carlo trial of one estimator.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  Method method = Method::kLS;
  PoseEstimate estimate;
  Pose truth;
  double reference_range_db = 0.0;
  double perturbation_std = 0.0;
  std::uint64_t seed_key = 0;  // key of the range-noise substream
  std::optional<std::string> failure;  // set when the estimator refused the trial

  bool ok() const { return !failure.has_value(); }
};

struct ColumnAngleError {
  double mean_deg = 0.0;          // average over the three columns
  int zero_norm_columns = 0;      // columns scored as 90° because ‖q̂_m‖ = 0
};

/// Angle between each true column q_m and the normalized estimate q̂_m,
/// averaged over the three columns. The cosine is clamped to [−1, 1].
ColumnAngleError column_angle_error(const Eigen::Matrix3d& truth,
                                    const Eigen::Matrix3d& estimate);

/// ‖t̂ − t‖.
double translation_error(const Pose& truth, const Pose& estimate);

/// (1/(3·N_exp)) Σ_i Σ_m acos(q_mᵀ q̂_m / ‖q̂_m‖), in degrees, over successful
/// records. Throws InvalidArgument for an empty set or mixed method/truth.
double mean_angular_error(std::span<const TrialRecord> records);

/// sqrt((1/N_exp) Σ_i ‖t̂_i − t‖²) over successful records.
double rmse_translation(std::span<const TrialRecord> records);

}  // namespace rigidloc
