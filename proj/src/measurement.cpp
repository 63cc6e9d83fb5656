#include "rigidloc/measurement.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rigidloc/errors.hpp"

namespace rigidloc {

bool NoiseModel::noise_disabled() const {
  return std::isinf(reference_range_db) && reference_range_db > 0;
}

void NoiseModel::validate() const {
  if (std::isnan(reference_range_db) ||
      (std::isinf(reference_range_db) && reference_range_db < 0)) {
    throw InvalidArgument("reference range must be finite or +inf");
  }
  if (!(perturbation_std >= 0.0) || !std::isfinite(perturbation_std)) {
    throw InvalidArgument("perturbation std must be finite and non-negative");
  }
}

double range_noise_std(const NoiseModel& model, double r) {
  if (!(r > 0.0)) {
    throw InvalidArgument("range_noise_std needs a positive range, got " + std::to_string(r));
  }
  model.validate();
  if (model.noise_disabled()) return 0.0;
  return r * std::pow(10.0, -model.reference_range_db / 20.0);
}

Eigen::MatrixXd true_ranges(const AnchorSet& anchors, const SensorPositions& sensors) {
  const auto& a = anchors.positions();
  Eigen::MatrixXd r(a.cols(), sensors.cols());
  for (Eigen::Index n = 0; n < sensors.cols(); ++n) {
    for (Eigen::Index m = 0; m < a.cols(); ++m) {
      r(m, n) = (a.col(m) - sensors.col(n)).norm();
    }
  }
  return r;
}

RangeSet simulate_ranges(const AnchorSet& anchors, const SensorPositions& sensors,
                         const NoiseModel& model, RandomStream& rng, bool per_sensor_noise) {
  model.validate();
  if (sensors.cols() < 1) {
    throw InvalidArgument("simulate_ranges needs at least one sensor");
  }
  if (!sensors.allFinite()) {
    throw InvalidArgument("sensor positions contain non-finite entries");
  }
  RangeSet rs;
  rs.model = model;
  rs.true_ranges = true_ranges(anchors, sensors);
  const Eigen::MatrixXd& r = *rs.true_ranges;
  if ((r.array() <= 0.0).any()) {
    throw InvalidArgument("an anchor coincides with a sensor");
  }
  rs.ranges = r;
  if (model.noise_disabled()) return rs;

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index n = 0; n < r.cols(); ++n) {
    for (Eigen::Index m = 0; m < r.rows(); ++m) {
      const double sigma = range_noise_std(model, per_sensor_noise ? r(m, n) : r(m, 0));
      rs.ranges(m, n) += sigma * gauss(rng);
    }
  }
  return rs;
}

SquaredRangeSet square_ranges(const RangeSet& rs) {
  return {rs.ranges.array().square().matrix()};
}

Topology perturb_topology(const Topology& topology, double std, RandomStream& rng) {
  if (!(std >= 0.0) || !std::isfinite(std)) {
    throw InvalidArgument("perturbation std must be finite and non-negative");
  }
  if (std == 0.0) return topology;
  std::normal_distribution<double> gauss(0.0, std);
  Eigen::Matrix3Xd c = topology.coords();
  for (Eigen::Index n = 0; n < c.cols(); ++n) {
    for (Eigen::Index k = 0; k < 3; ++k) c(k, n) += gauss(rng);
  }
  return Topology(std::move(c));
}

}  // namespace rigidloc
