#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "rigidloc/errors.hpp"
#include "rigidloc/measurement.hpp"
#include "test_support.hpp"

namespace rigidloc {
namespace {

using testing::pyramid_scenario;

NoiseModel at_db(double db) { return NoiseModel{db, 0.0}; }

TEST(RangeNoiseStd, OneMillimeterAtHundredMetersAndHundredDecibels) {
  EXPECT_DOUBLE_EQ(range_noise_std(at_db(100), 100.0), 1e-3);
}

TEST(RangeNoiseStd, LinearInRange) {
  EXPECT_DOUBLE_EQ(range_noise_std(at_db(100), 200.0), 2e-3);
}

TEST(RangeNoiseStd, FortyDecibels) {
  EXPECT_DOUBLE_EQ(range_noise_std(at_db(40), 100.0), 1.0);
}

TEST(RangeNoiseStd, DisabledNoiseAndBadRanges) {
  EXPECT_EQ(range_noise_std(NoiseModel::noiseless(), 100.0), 0.0);
  EXPECT_THROW(range_noise_std(at_db(100), 0.0), InvalidArgument);
  EXPECT_THROW(range_noise_std(at_db(100), -1.0), InvalidArgument);
  EXPECT_THROW(range_noise_std(at_db(std::numeric_limits<double>::quiet_NaN()), 1.0),
               InvalidArgument);
}

TEST(SimulateRanges, NoiselessEqualsEuclideanDistance) {
  const auto s = pyramid_scenario();
  RandomStream rng(1);
  const RangeSet rs = simulate_ranges(s.anchors, s.sensors, NoiseModel::noiseless(), rng);
  for (Eigen::Index m = 0; m < rs.ranges.rows(); ++m) {
    for (Eigen::Index n = 0; n < rs.ranges.cols(); ++n) {
      EXPECT_EQ(rs.ranges(m, n), (s.anchors.positions().col(m) - s.sensors.col(n)).norm());
    }
  }
  ASSERT_TRUE(rs.true_ranges.has_value());
  EXPECT_EQ(*rs.true_ranges, rs.ranges);
}

TEST(SimulateRanges, SameSeedIsBitIdentical) {
  const auto s = pyramid_scenario();
  RandomStream a = RandomStream::substream(42, 3, StreamPurpose::kRangeNoise);
  RandomStream b = RandomStream::substream(42, 3, StreamPurpose::kRangeNoise);
  RandomStream c = RandomStream::substream(42, 4, StreamPurpose::kRangeNoise);
  const auto ra = simulate_ranges(s.anchors, s.sensors, at_db(60), a);
  const auto rb = simulate_ranges(s.anchors, s.sensors, at_db(60), b);
  const auto rc = simulate_ranges(s.anchors, s.sensors, at_db(60), c);
  EXPECT_EQ(ra.ranges, rb.ranges);
  EXPECT_NE(ra.ranges, rc.ranges);
}

TEST(SimulateRanges, NoiseStdFollowsReferenceSensorDistance) {
  const auto s = pyramid_scenario();
  const auto truth = true_ranges(s.anchors, s.sensors);
  const int reps = 10000;
  RandomStream rng(2024);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(truth.rows(), truth.cols());
  Eigen::MatrixXd sum_sq = sum;
  for (int i = 0; i < reps; ++i) {
    const Eigen::MatrixXd e = simulate_ranges(s.anchors, s.sensors, at_db(100), rng).ranges - truth;
    sum += e;
    sum_sq += e.array().square().matrix();
  }
  for (Eigen::Index m = 0; m < truth.rows(); ++m) {
    const double expected = range_noise_std(at_db(100), truth(m, 0));
    for (Eigen::Index n = 0; n < truth.cols(); ++n) {
      const double mean = sum(m, n) / reps;
      const double sd = std::sqrt(sum_sq(m, n) / reps - mean * mean);
      EXPECT_NEAR(sd / expected, 1.0, 0.05) << "anchor " << m << " sensor " << n;
    }
  }
}

TEST(SimulateRanges, NegativeRangesAreKeptUnclipped) {
  const auto s = pyramid_scenario();
  const Eigen::MatrixXd truth = true_ranges(s.anchors, s.sensors);
  RandomStream rng(12);
  const int reps = 4000;
  int negative = 0;
  double sum_z = 0.0;
  for (int i = 0; i < reps; ++i) {
    const Eigen::MatrixXd r = simulate_ranges(s.anchors, s.sensors, at_db(0), rng).ranges;
    negative += static_cast<int>((r.array() < 0.0).count());
    // At 0 dB σ equals r(a_m, s_1), so each standardized error is N(0, 1).
    sum_z += ((r - truth).array().colwise() / truth.col(0).array()).sum();
  }
  const double count = static_cast<double>(reps) * truth.size();
  EXPECT_GT(negative, 0);
  EXPECT_LE(std::abs(sum_z / count), 3.0 / std::sqrt(count));
}

TEST(SimulateRanges, PerSensorNoiseUsesOwnDistance) {
  const auto s = pyramid_scenario();
  const auto truth = true_ranges(s.anchors, s.sensors);
  const int reps = 10000;
  RandomStream rng(77);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(truth.rows(), truth.cols());
  for (int i = 0; i < reps; ++i) {
    const Eigen::MatrixXd e =
        simulate_ranges(s.anchors, s.sensors, at_db(80), rng, true).ranges - truth;
    sum_sq += e.array().square().matrix();
  }
  for (Eigen::Index m = 0; m < truth.rows(); ++m) {
    for (Eigen::Index n = 0; n < truth.cols(); ++n) {
      const double expected = range_noise_std(at_db(80), truth(m, n));
      EXPECT_NEAR(std::sqrt(sum_sq(m, n) / reps) / expected, 1.0, 0.05);
    }
  }
}

TEST(SimulateRanges, RejectsCoincidentAnchorAndSensor) {
  const AnchorSet anchors(Eigen::Matrix3Xd::Zero(3, 3));
  const SensorPositions sensors = Eigen::Matrix3Xd::Zero(3, 1);
  RandomStream rng(1);
  EXPECT_THROW(simulate_ranges(anchors, sensors, at_db(100), rng), InvalidArgument);
}

TEST(SquareRanges, Elementwise) {
  RangeSet rs;
  rs.ranges = Eigen::MatrixXd::Constant(1, 1, 3.0);
  EXPECT_EQ(square_ranges(rs).d(0, 0), 9.0);
}

TEST(SquareRanges, NoiselessMatchesExpandedSquaredDistance) {
  const auto s = pyramid_scenario();
  RandomStream rng(1);
  const auto d = square_ranges(simulate_ranges(s.anchors, s.sensors, NoiseModel::noiseless(), rng)).d;
  for (Eigen::Index m = 0; m < d.rows(); ++m) {
    const Eigen::Vector3d a = s.anchors.positions().col(m);
    for (Eigen::Index n = 0; n < d.cols(); ++n) {
      const Eigen::Vector3d sn = s.sensors.col(n);
      const double expanded = a.squaredNorm() - 2.0 * a.dot(sn) + sn.squaredNorm();
      EXPECT_NEAR(d(m, n), expanded, 1e-9 * expanded);
    }
  }
}

TEST(SquareRanges, NoiseTermDecomposes) {
  RangeSet rs;
  const double r = 40.0;
  const double e = 0.125;
  rs.ranges = Eigen::MatrixXd::Constant(1, 1, r + e);
  EXPECT_DOUBLE_EQ(square_ranges(rs).d(0, 0), r * r + 2 * r * e + e * e);
}

// n = d̂ − d has mean σ² (the e² term) and variance 4σ²r² + 2σ⁴.
TEST(SquaredNoise, MeanAndVarianceMatchSecondOrderModel) {
  const auto s = pyramid_scenario();
  const auto truth = true_ranges(s.anchors, s.sensors);
  const Eigen::MatrixXd d_true = truth.array().square().matrix();
  for (double db : {60.0, 80.0}) {
    const int reps = 100000;
    RandomStream rng(static_cast<std::uint64_t>(db));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(truth.rows());
    Eigen::VectorXd sum_sq = sum;
    for (int i = 0; i < reps; ++i) {
      const auto d = square_ranges(simulate_ranges(s.anchors, s.sensors, at_db(db), rng)).d;
      const Eigen::VectorXd n1 = d.col(0) - d_true.col(0);
      sum += n1;
      sum_sq += n1.array().square().matrix();
    }
    for (Eigen::Index m = 0; m < truth.rows(); ++m) {
      const double sigma = range_noise_std(at_db(db), truth(m, 0));
      const double mean = sum(m) / reps;
      const double var = sum_sq(m) / reps - mean * mean;
      const double model_var = 4 * sigma * sigma * truth(m, 0) * truth(m, 0);
      const double standard_error = std::sqrt(var / reps);
      EXPECT_NEAR(mean, sigma * sigma, 3 * standard_error) << db << " dB, anchor " << m;
      EXPECT_NEAR(var / model_var, 1.0, 0.05) << db << " dB, anchor " << m;
    }
  }
}

TEST(PerturbTopology, ZeroStdIsIdentity) {
  RandomStream rng(5);
  const Topology c = default_topology();
  EXPECT_EQ(perturb_topology(c, 0.0, rng).coords(), c.coords());
}

TEST(PerturbTopology, PooledStdIsOneMillimeter) {
  const Topology c(Eigen::Matrix3Xd::Zero(3, 33334));
  RandomStream rng(9);
  const Eigen::Matrix3Xd p = perturb_topology(c, 1e-3, rng).coords();
  const double mean = p.mean();
  const double sd = std::sqrt((p.array() - mean).square().sum() / static_cast<double>(p.size()));
  EXPECT_NEAR(sd / 1e-3, 1.0, 0.02);
}

TEST(PerturbTopology, DeterministicAndValidated) {
  RandomStream a(12), b(12);
  const Topology c = default_topology();
  EXPECT_EQ(perturb_topology(c, 1e-3, a).coords(), perturb_topology(c, 1e-3, b).coords());
  EXPECT_THROW(perturb_topology(c, -1e-3, a), InvalidArgument);
}

TEST(RandomStream, SubstreamsAreDistinct) {
  auto a = RandomStream::substream(1, 0, StreamPurpose::kAnchors);
  auto b = RandomStream::substream(1, 0, StreamPurpose::kRangeNoise);
  auto c = RandomStream::substream(1, 1, StreamPurpose::kAnchors);
  auto d = RandomStream::substream(2, 0, StreamPurpose::kAnchors);
  const auto first = a();
  EXPECT_NE(first, b());
  EXPECT_NE(first, c());
  EXPECT_NE(first, d());
  EXPECT_EQ(a.counter(), 1u);
}

}  // namespace
}  // namespace rigidloc
