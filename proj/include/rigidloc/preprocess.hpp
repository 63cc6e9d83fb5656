#pragma once

#include <Eigen/Dense>

#include "rigidloc/geometry.hpp"
#include "rigidloc/measurement.hpp"

namespace rigidloc {

/// Whitened, projected linear models built from squared ranges.
///
///   D_bar   = U_Mᵀ W (D − u 1ᵀ)          (M−1)×N,  D_bar   = A_bar [Q|t] C_e + noise
///   A_bar   = −2 U_Mᵀ W Aᵀ               (M−1)×3
///   D_tilde = D_bar U_N                  (M−1)×(N−1), D_tilde = A_bar Q C_bar + noise
///   C_bar   = C U_N                       3×(N−1)
///   C_e     = [C; 1ᵀ]                     4×N
///
/// U_M spans the complement of W·1 and U_N the complement of 1, so the
/// ‖s_n‖² term and the translation respectively drop out.
struct PreprocessedModel {
  Eigen::MatrixXd D_bar;
  Eigen::MatrixXd A_bar;
  Eigen::MatrixXd D_tilde;
  Eigen::Matrix3Xd C_bar;
  Eigen::Matrix4Xd C_e;
  Eigen::VectorXd W;  // diagonal of the M×M whitener
  Eigen::MatrixXd U_M;
  Eigen::MatrixXd U_N;
  Eigen::Matrix3Xd C;  // the topology the model was built with

  Eigen::Index anchor_count() const { return W.size(); }
  Eigen::Index sensor_count() const { return C.cols(); }
};

/// Diagonal of W = Σ̂^(−1/2), where σ̂_m² = 4·σ²(e_m)·r̂_m² and σ(e_m) is the
/// ranging std at the measured range r̂_m from anchor m to the reference sensor.
/// With noise disabled the reference-range scale is dropped (W_mm = 1/(2 r̂_m²));
/// the estimators are invariant to a common scale of W.
/// Throws MeasurementError for any r̂_m <= 0.
Eigen::VectorXd whitening_matrix(const Eigen::VectorXd& measured_ranges_to_reference,
                                 const NoiseModel& model);

/// Convenience overload: uses the first sensor column of `rs`.
Eigen::VectorXd whitening_matrix(const RangeSet& rs);

PreprocessedModel build_model(const SquaredRangeSet& d, const AnchorSet& anchors,
                              const Eigen::VectorXd& W, const Topology& topology_known);

/// As build_model, but with caller-supplied orthonormal bases. U_M must be
/// M×(M−1) with U_Mᵀ W 1 = 0 and U_N must be N×(N−1) with 1ᵀ U_N = 0; both are
/// verified.
PreprocessedModel build_model_with_bases(const SquaredRangeSet& d, const AnchorSet& anchors,
                                         const Eigen::VectorXd& W,
                                         const Topology& topology_known,
                                         const Eigen::MatrixXd& U_M,
                                         const Eigen::MatrixXd& U_N);

}  // namespace rigidloc
