#pragma once

#include <Eigen/Dense>

namespace rigidloc {

using SensorPositions = Eigen::Matrix3Xd;

/// Known sensor coordinates in the body frame, one column per sensor.
class Topology {
 public:
  explicit Topology(Eigen::Matrix3Xd coords);

  const Eigen::Matrix3Xd& coords() const { return coords_; }
  Eigen::Index sensor_count() const { return coords_.cols(); }

  /// [C; 1ᵀ], the 4×N matrix that maps the stacked [Q | t] onto sensor positions.
  Eigen::Matrix4Xd extended() const;

 private:
  Eigen::Matrix3Xd coords_;
};

/// Absolute anchor positions, one column per anchor.
class AnchorSet {
 public:
  explicit AnchorSet(Eigen::Matrix3Xd positions);

  const Eigen::Matrix3Xd& positions() const { return positions_; }
  Eigen::Index anchor_count() const { return positions_.cols(); }

  /// Squared norm of each anchor position.
  Eigen::VectorXd squared_norms() const;

 private:
  Eigen::Matrix3Xd positions_;
};

/// Rotation (possibly a raw least-squares matrix) plus translation.
///
/// `unitary` is set only by producers that guarantee QᵀQ = I. Raw LS output
/// leaves it false and makes no claim about the columns.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  bool unitary = true;

  /// [Q | t] as a 3×4 matrix.
  Eigen::Matrix<double, 3, 4> stacked() const;
};

/// Per-axis angles in degrees. Composition is extrinsic x, then y, then z.
struct EulerAngles {
  double alpha_x = 0.0;
  double beta_y = 0.0;
  double gamma_z = 0.0;
};

inline constexpr const char* kEulerConvention = "extrinsic-xyz (Q = Rz(gamma) * Ry(beta) * Rx(alpha))";

Eigen::Matrix3d rotation_x(double degrees);
Eigen::Matrix3d rotation_y(double degrees);
Eigen::Matrix3d rotation_z(double degrees);

/// Q = Rz(gamma) Ry(beta) Rx(alpha), t = 0.
Pose pose_from_euler(const EulerAngles& angles);

/// S = Q C + t 1ᵀ.
SensorPositions apply_pose(const Topology& topology, const Pose& pose);

/// Orthonormal basis of the orthogonal complement of v: a K×(K−1) matrix U
/// with Uᵀv = 0 and UᵀU = I. Built from a Householder decomposition of v.
Eigen::MatrixXd nullspace_basis(const Eigen::VectorXd& v);

/// Relative singular-value cutoff max(rows, cols)·ε used by pseudo_inverse and numerical_rank.
double rank_tolerance(const Eigen::MatrixXd& x);

/// Moore–Penrose pseudo-inverse via SVD; singular values at or below
/// rank_tolerance(x)·σ_max are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& x);

/// Number of singular values above rank_tolerance(x)·σ_max.
Eigen::Index numerical_rank(const Eigen::MatrixXd& x);

/// σ_max / σ_min over all min(rows, cols) singular values; +inf when rank-deficient.
double condition_number(const Eigen::MatrixXd& x);

}  // namespace rigidloc
