#include "rigidloc/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rigidloc/errors.hpp"

namespace rigidloc {

namespace {

double to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + " contains non-finite entries");
  }
}

}  // namespace

Topology::Topology(Eigen::Matrix3Xd coords) : coords_(std::move(coords)) {
  if (coords_.cols() < 1) {
    throw InvalidArgument("topology needs at least one sensor");
  }
  require_finite(coords_, "topology");
}

Eigen::Matrix4Xd Topology::extended() const {
  Eigen::Matrix4Xd ce(4, coords_.cols());
  ce.topRows<3>() = coords_;
  ce.row(3).setOnes();
  return ce;
}

AnchorSet::AnchorSet(Eigen::Matrix3Xd positions) : positions_(std::move(positions)) {
  if (positions_.cols() < 2) {
    throw InvalidArgument("anchor set needs at least two anchors, got " +
                          std::to_string(positions_.cols()));
  }
  require_finite(positions_, "anchor set");
}

Eigen::VectorXd AnchorSet::squared_norms() const {
  return positions_.colwise().squaredNorm().transpose();
}

Eigen::Matrix<double, 3, 4> Pose::stacked() const {
  Eigen::Matrix<double, 3, 4> qe;
  qe.leftCols<3>() = rotation;
  qe.col(3) = translation;
  return qe;
}

Eigen::Matrix3d rotation_x(double degrees) {
  const double c = std::cos(to_radians(degrees));
  const double s = std::sin(to_radians(degrees));
  Eigen::Matrix3d r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Eigen::Matrix3d rotation_y(double degrees) {
  const double c = std::cos(to_radians(degrees));
  const double s = std::sin(to_radians(degrees));
  Eigen::Matrix3d r;
  r << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return r;
}

Eigen::Matrix3d rotation_z(double degrees) {
  const double c = std::cos(to_radians(degrees));
  const double s = std::sin(to_radians(degrees));
  Eigen::Matrix3d r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

Pose pose_from_euler(const EulerAngles& angles) {
  if (!std::isfinite(angles.alpha_x) || !std::isfinite(angles.beta_y) ||
      !std::isfinite(angles.gamma_z)) {
    throw InvalidArgument("Euler angles must be finite");
  }
  Pose pose;
  pose.rotation =
      rotation_z(angles.gamma_z) * rotation_y(angles.beta_y) * rotation_x(angles.alpha_x);
  pose.unitary = true;
  return pose;
}

SensorPositions apply_pose(const Topology& topology, const Pose& pose) {
  SensorPositions s = pose.rotation * topology.coords();
  s.colwise() += pose.translation;
  return s;
}

Eigen::MatrixXd nullspace_basis(const Eigen::VectorXd& v) {
  const Eigen::Index k = v.size();
  if (k < 2) {
    throw InvalidArgument("null-space basis needs a vector of length >= 2");
  }
  if (!v.allFinite() || v.norm() == 0.0) {
    throw InvalidArgument("null-space basis of a zero or non-finite vector");
  }
  // The first Householder column is ±v/‖v‖; the rest complete it to an orthonormal basis.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  return q.rightCols(k - 1);
}

double rank_tolerance(const Eigen::MatrixXd& x) {
  return static_cast<double>(std::max(x.rows(), x.cols())) *
         std::numeric_limits<double>::epsilon();
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& x) {
  if (x.size() == 0) {
    return Eigen::MatrixXd::Zero(x.cols(), x.rows());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_tolerance(x) * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& x) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_tolerance(x) * sv(0);
  return (sv.array() > cutoff).count();
}

double condition_number(const Eigen::MatrixXd& x) {
  if (x.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest <= rank_tolerance(x) * sv(0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

}  // namespace rigidloc
