#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidloc/config.hpp"
#include "rigidloc/geometry.hpp"
#include "rigidloc/harness.hpp"
#include "rigidloc/measurement.hpp"
#include "rigidloc/preprocess.hpp"
#include "rigidloc/random.hpp"

namespace rigidloc::testing {

/// Pyramid topology, (20, -25, 10) deg rotation, t = (5, 5, 5), ten anchors in [0, 100]^3.
struct Scenario {
  Topology topology = default_topology();
  Pose truth;
  AnchorSet anchors{Eigen::Matrix3Xd::Zero(3, 2)};
  SensorPositions sensors;
};

inline Scenario pyramid_scenario(std::uint64_t seed = 7, int anchor_count = 10) {
  Scenario s;
  s.truth = pose_from_euler({20.0, -25.0, 10.0});
  s.truth.translation = Eigen::Vector3d::Constant(5.0);
  RandomStream rng = RandomStream::substream(seed, 0, StreamPurpose::kTest);
  do {
    s.anchors = draw_anchors(AnchorRegion{}, anchor_count, rng);
  } while (anchor_count >= 4 && !anchors_span_space(s.anchors));
  s.sensors = apply_pose(s.topology, s.truth);
  return s;
}

inline PreprocessedModel model_for(const Scenario& s, const NoiseModel& noise, RandomStream& rng,
                                   const Topology* known = nullptr) {
  const RangeSet rs = simulate_ranges(s.anchors, s.sensors, noise, rng);
  return build_model(square_ranges(rs), s.anchors, whitening_matrix(rs),
                     known ? *known : s.topology);
}

inline PreprocessedModel noiseless_model(const Scenario& s) {
  RandomStream rng(0);
  return model_for(s, NoiseModel::noiseless(), rng);
}

/// A model whose Procrustes stage sees exactly (C_bar, X): A_bar = I, M = 4.
inline PreprocessedModel procrustes_model(const Eigen::Matrix3Xd& c_bar,
                                          const Eigen::Matrix3Xd& x) {
  const Eigen::Index n = c_bar.cols() + 1;
  PreprocessedModel m;
  m.U_N = nullspace_basis(Eigen::VectorXd::Ones(n));
  m.W = Eigen::VectorXd::Ones(4);
  m.U_M = nullspace_basis(m.W);
  m.A_bar = Eigen::MatrixXd::Identity(3, 3);
  m.C = c_bar * m.U_N.transpose();
  m.C_bar = c_bar;
  m.C_e = Topology(m.C).extended();
  m.D_tilde = x;
  m.D_bar = x * m.U_N.transpose();
  return m;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                                     double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(gen);
  return m;
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index k, std::mt19937_64& gen) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(k, k, gen));
  return qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
}

/// Angle of the relative rotation Aᵀ B, in degrees.
inline double rotation_distance_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rigidloc::testing
