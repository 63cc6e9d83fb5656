#include "rigidloc/preprocess.hpp"

#include <cmath>
#include <string>

#include "rigidloc/errors.hpp"

namespace rigidloc {

namespace {

constexpr double kBasisTolerance = 1e-10;

void check_basis(const Eigen::MatrixXd& basis, const Eigen::VectorXd& annihilated,
                 const char* name) {
  const Eigen::Index k = annihilated.size();
  if (basis.rows() != k || basis.cols() != k - 1) {
    throw InvalidArgument(std::string(name) + " must be " + std::to_string(k) + "x" +
                          std::to_string(k - 1));
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if ((gram - Eigen::MatrixXd::Identity(k - 1, k - 1)).norm() > kBasisTolerance) {
    throw InvalidArgument(std::string(name) + " is not orthonormal");
  }
  if ((basis.transpose() * annihilated).norm() > kBasisTolerance * annihilated.norm()) {
    throw InvalidArgument(std::string(name) + " does not annihilate its target vector");
  }
}

}  // namespace

Eigen::VectorXd whitening_matrix(const Eigen::VectorXd& measured_ranges_to_reference,
                                 const NoiseModel& model) {
  model.validate();
  const Eigen::Index m = measured_ranges_to_reference.size();
  Eigen::VectorXd w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = measured_ranges_to_reference(i);
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw MeasurementError("measured range from anchor " + std::to_string(i) +
                             " to the reference sensor is not positive (" + std::to_string(r) +
                             ")");
    }
    const double sigma_e = model.noise_disabled() ? 1.0 : range_noise_std(model, r) / r;
    // σ̂_m = 2·σ(e)·r̂ with σ(e) = r̂·sigma_e.
    w(i) = 1.0 / (2.0 * sigma_e * r * r);
  }
  return w;
}

Eigen::VectorXd whitening_matrix(const RangeSet& rs) {
  if (rs.ranges.cols() < 1) throw InvalidArgument("range set has no sensors");
  return whitening_matrix(rs.ranges.col(0), rs.model);
}

PreprocessedModel build_model(const SquaredRangeSet& d, const AnchorSet& anchors,
                              const Eigen::VectorXd& W, const Topology& topology_known) {
  if (W.size() != anchors.anchor_count()) {
    throw InvalidArgument("whitener size does not match the anchor count");
  }
  const Eigen::Index n = topology_known.sensor_count();
  if (n < 2) {
    throw InvalidArgument("need at least two sensors to project out the translation");
  }
  return build_model_with_bases(d, anchors, W, topology_known, nullspace_basis(W),
                                nullspace_basis(Eigen::VectorXd::Ones(n)));
}

PreprocessedModel build_model_with_bases(const SquaredRangeSet& d, const AnchorSet& anchors,
                                         const Eigen::VectorXd& W,
                                         const Topology& topology_known,
                                         const Eigen::MatrixXd& U_M,
                                         const Eigen::MatrixXd& U_N) {
  const Eigen::Index m = anchors.anchor_count();
  const Eigen::Index n = topology_known.sensor_count();
  if (d.d.rows() != m || d.d.cols() != n) {
    throw InvalidArgument("squared ranges are " + std::to_string(d.d.rows()) + "x" +
                          std::to_string(d.d.cols()) + ", expected " + std::to_string(m) +
                          "x" + std::to_string(n));
  }
  if (W.size() != m || !(W.array() > 0.0).all() || !W.allFinite()) {
    throw InvalidArgument("whitener must hold M positive finite weights");
  }
  if (n < 2) {
    throw InvalidArgument("need at least two sensors to project out the translation");
  }
  // W·1 is just the diagonal of W.
  check_basis(U_M, W, "U_M");
  check_basis(U_N, Eigen::VectorXd::Ones(n), "U_N");

  PreprocessedModel model;
  model.W = W;
  model.U_M = U_M;
  model.U_N = U_N;
  model.C = topology_known.coords();
  model.C_e = topology_known.extended();

  Eigen::MatrixXd centered = d.d;
  centered.colwise() -= anchors.squared_norms();
  const Eigen::MatrixXd projector = U_M.transpose() * W.asDiagonal();
  model.D_bar = projector * centered;
  model.A_bar = -2.0 * projector * anchors.positions().transpose();
  model.D_tilde = model.D_bar * U_N;
  model.C_bar = model.C * U_N;
  return model;
}

}  // namespace rigidloc
