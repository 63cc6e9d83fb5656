#pragma once

#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "rigidloc/geometry.hpp"
#include "rigidloc/random.hpp"

namespace rigidloc {

/// Ranging noise parameterization.
///
/// `reference_range_db` is 10·log10(Ns·κ·SNR / 3c²): at X dB the ranging
/// standard deviation at distance r is r·10^(−X/20). +inf disables noise.
struct NoiseModel {
  double reference_range_db = std::numeric_limits<double>::infinity();
  double perturbation_std = 0.0;  // meters

  static NoiseModel noiseless() { return {}; }
  bool noise_disabled() const;
  void validate() const;
};

/// Measured (and, in simulation, true) anchor-to-sensor ranges, M×N.
struct RangeSet {
  Eigen::MatrixXd ranges;
  NoiseModel model;
  std::optional<Eigen::MatrixXd> true_ranges;
};

/// Element-wise squared ranges, M×N, m².
struct SquaredRangeSet {
  Eigen::MatrixXd d;
};

/// Ranging standard deviation at distance r (meters). Throws for r <= 0.
double range_noise_std(const NoiseModel& model, double r);

/// Exact anchor-to-sensor distances, M×N.
Eigen::MatrixXd true_ranges(const AnchorSet& anchors, const SensorPositions& sensors);

/// Noisy ranges. Every entry in anchor row m draws Gaussian noise with the
/// standard deviation evaluated at the anchor's distance to sensor 1; with
/// `per_sensor_noise` the distance to the entry's own sensor is used instead.
/// Draws are taken in column-major (sensor-major) order from `rng`.
RangeSet simulate_ranges(const AnchorSet& anchors, const SensorPositions& sensors,
                         const NoiseModel& model, RandomStream& rng,
                         bool per_sensor_noise = false);

SquaredRangeSet square_ranges(const RangeSet& rs);

/// Copy of the topology with i.i.d. N(0, std²) added to every coordinate.
Topology perturb_topology(const Topology& topology, double std, RandomStream& rng);

}  // namespace rigidloc
