#include "rigidloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rigidloc/errors.hpp"

namespace rigidloc {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void check_homogeneous(std::span<const TrialRecord> records) {
  if (records.empty()) throw InvalidArgument("no trial records to aggregate");
  const TrialRecord& first = records.front();
  for (const auto& r : records) {
    if (r.method != first.method) {
      throw InvalidArgument("trial records mix estimators");
    }
    if (r.truth.rotation != first.truth.rotation ||
        r.truth.translation != first.truth.translation) {
      throw InvalidArgument("trial records mix ground-truth poses");
    }
  }
}

}  // namespace

ColumnAngleError column_angle_error(const Eigen::Matrix3d& truth,
                                    const Eigen::Matrix3d& estimate) {
  ColumnAngleError out;
  double sum = 0.0;
  for (int m = 0; m < 3; ++m) {
    const double norm = estimate.col(m).norm();
    if (!(norm > 0.0)) {
      sum += 90.0;
      ++out.zero_norm_columns;
      continue;
    }
    const double cosine = std::clamp(truth.col(m).dot(estimate.col(m)) / norm, -1.0, 1.0);
    sum += std::acos(cosine) * kRadToDeg;
  }
  out.mean_deg = sum / 3.0;
  return out;
}

double translation_error(const Pose& truth, const Pose& estimate) {
  return (estimate.translation - truth.translation).norm();
}

double mean_angular_error(std::span<const TrialRecord> records) {
  check_homogeneous(records);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    sum += column_angle_error(r.truth.rotation, r.estimate.pose.rotation).mean_deg;
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(count);
}

double rmse_translation(std::span<const TrialRecord> records) {
  check_homogeneous(records);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const double e = translation_error(r.truth, r.estimate.pose);
    sum += e * e;
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace rigidloc
