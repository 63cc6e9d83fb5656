#include "rigidloc/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rigidloc/errors.hpp"

namespace rigidloc {

namespace {

constexpr int kUnknowns = 12;

void require_a_bar_rank(const PreprocessedModel& model, Eigen::Index rank) {
  if (rank < 3) {
    throw IdentifiabilityError("A_bar = -2 U_M^T W A^T has rank " + std::to_string(rank) +
                               " < 3 (needs M >= 4 anchors not confined to a plane); M = " +
                               std::to_string(model.anchor_count()));
  }
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

std::vector<Eigen::Matrix3d> axis_grid(double resolution_deg, double lo, double hi,
                                       bool inclusive, Eigen::Matrix3d (*axis)(double)) {
  std::vector<Eigen::Matrix3d> out;
  const auto steps = static_cast<long>(std::floor((hi - lo) / resolution_deg + 1e-9));
  const long count = inclusive ? steps + 1 : steps;
  out.reserve(static_cast<std::size_t>(std::max(count, 1L)));
  for (long i = 0; i < std::max(count, 1L); ++i) {
    out.push_back(axis(lo + static_cast<double>(i) * resolution_deg));
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kLS: return "LS";
    case Method::kCLS: return "CLS";
    case Method::kCTLS: return "CTLS";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "LS") return Method::kLS;
  if (upper == "CLS") return Method::kCLS;
  if (upper == "CTLS") return Method::kCTLS;
  return std::nullopt;
}

PoseEstimate estimate_ls(const PreprocessedModel& model, const EstimatorOptions& options) {
  const Eigen::Index m = model.anchor_count();
  const Eigen::Index n = model.sensor_count();
  if ((m - 1) * n < kUnknowns) {
    throw IdentifiabilityError("joint LS needs (M-1)N >= 12 equations, got (M-1)N = " +
                               std::to_string((m - 1) * n) + " (M = " + std::to_string(m) +
                               ", N = " + std::to_string(n) + ")");
  }
  PoseEstimate est;
  est.method = Method::kLS;
  est.diagnostics.a_bar_rank = numerical_rank(model.A_bar);
  require_a_bar_rank(model, est.diagnostics.a_bar_rank);
  est.diagnostics.topology_rank = numerical_rank(model.C_e);
  if (est.diagnostics.topology_rank < 4) {
    throw IdentifiabilityError("C_e = [C; 1^T] has rank " +
                               std::to_string(est.diagnostics.topology_rank) +
                               " < 4 (sensors must not be coplanar)");
  }

  Eigen::Matrix<double, 3, 4> qe;
  if (options.ls_path == LsSolvePath::kKronecker) {
    const Eigen::MatrixXd k = kronecker(model.C_e.transpose(), model.A_bar);
    const Eigen::VectorXd d = model.D_bar.reshaped();
    const Eigen::VectorXd q = pseudo_inverse(k) * d;
    qe = q.reshaped(3, 4);
    est.diagnostics.condition_number = condition_number(k);
  } else {
    qe = pseudo_inverse(model.A_bar) * model.D_bar * pseudo_inverse(model.C_e);
    est.diagnostics.condition_number =
        condition_number(model.A_bar) * condition_number(model.C_e);
  }
  est.pose.rotation = qe.leftCols<3>();
  est.pose.translation = qe.col(3);
  est.pose.unitary = false;
  est.column_norms = est.pose.rotation.colwise().norm().transpose();
  est.diagnostics.reflection = est.pose.rotation.determinant() < 0.0;
  return est;
}

ProcrustesSolution solve_orthogonal_procrustes(const Eigen::Matrix3Xd& C_bar,
                                               const Eigen::Matrix3Xd& X,
                                               bool proper_rotation) {
  if (C_bar.cols() != X.cols()) {
    throw InvalidArgument("Procrustes inputs differ in column count");
  }
  const Eigen::Matrix3d cross = C_bar * X.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  ProcrustesSolution sol;
  sol.singular_values = svd.singularValues();
  sol.rotation = v * u.transpose();

  const double tol = 1e3 * std::numeric_limits<double>::epsilon() *
                     std::max(sol.singular_values(0), std::numeric_limits<double>::min());
  // The orthogonal polar factor is unique iff C_bar Xᵀ is nonsingular.
  sol.degenerate = sol.singular_values(2) <= tol;
  if (proper_rotation && sol.rotation.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    sol.rotation = v * flip * u.transpose();
    // With the sign flip the answer is unique only if the two weakest directions differ.
    sol.degenerate =
        sol.degenerate || (sol.singular_values(1) - sol.singular_values(2)) <= tol;
  }
  return sol;
}

double procrustes_objective(const Eigen::Matrix3d& Q, const Eigen::Matrix3Xd& C_bar,
                            const Eigen::Matrix3Xd& X) {
  return (Q * C_bar - X).norm();
}

PoseEstimate estimate_cls(const PreprocessedModel& model, const EstimatorOptions& options) {
  PoseEstimate est;
  est.method = Method::kCLS;
  est.diagnostics.a_bar_rank = numerical_rank(model.A_bar);
  require_a_bar_rank(model, est.diagnostics.a_bar_rank);
  est.diagnostics.topology_rank = numerical_rank(model.C_bar);
  if (est.diagnostics.topology_rank < 1) {
    throw IdentifiabilityError("centered topology C_bar = C U_N is zero; all sensors coincide");
  }
  est.diagnostics.condition_number = condition_number(model.A_bar);

  const Eigen::MatrixXd a_pinv = pseudo_inverse(model.A_bar);
  const Eigen::Matrix3Xd x = a_pinv * model.D_tilde;
  const ProcrustesSolution sol =
      solve_orthogonal_procrustes(model.C_bar, x, options.proper_rotation);
  est.diagnostics.degenerate = sol.degenerate;

  const Eigen::Index n = model.sensor_count();
  const Eigen::Matrix3Xd residual = a_pinv * model.D_bar - sol.rotation * model.C;
  est.pose.rotation = sol.rotation;
  est.pose.translation = residual.rowwise().sum() / static_cast<double>(n);
  est.pose.unitary = true;
  est.column_norms = sol.rotation.colwise().norm().transpose();
  est.diagnostics.reflection = sol.rotation.determinant() < 0.0;
  return est;
}

PoseEstimate estimate_ctls(const PreprocessedModel& model, const EstimatorOptions& options) {
  PoseEstimate est = estimate_cls(model, options);
  est.method = Method::kCTLS;
  return est;
}

PoseEstimate estimate(Method method, const PreprocessedModel& model,
                      const EstimatorOptions& options) {
  switch (method) {
    case Method::kLS: return estimate_ls(model, options);
    case Method::kCLS: return estimate_cls(model, options);
    case Method::kCTLS: return estimate_ctls(model, options);
  }
  throw InvalidArgument("unknown estimator");
}

Pose oracle_procrustes_grid(const Eigen::Matrix3Xd& C_bar, const Eigen::Matrix3Xd& X,
                            double resolution_deg) {
  if (!(resolution_deg > 0.0 && resolution_deg <= 30.0)) {
    throw InvalidArgument("grid resolution must lie in (0, 30] degrees");
  }
  if (C_bar.cols() != X.cols()) {
    throw InvalidArgument("Procrustes inputs differ in column count");
  }
  // For orthogonal Q, ‖QC − X‖² = ‖C‖² + ‖X‖² − 2⟨Q, XCᵀ⟩, so the grid only
  // has to maximize the inner product.
  const Eigen::Matrix3d target = X * C_bar.transpose();
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1.0;

  const auto rx = axis_grid(resolution_deg, -180.0, 180.0, false, &rotation_x);
  const auto ry = axis_grid(resolution_deg, -90.0, 90.0, true, &rotation_y);
  const auto rz = axis_grid(resolution_deg, -180.0, 180.0, false, &rotation_z);

  double best = -std::numeric_limits<double>::infinity();
  Eigen::Matrix3d best_q = Eigen::Matrix3d::Identity();
  for (const auto& z : rz) {
    for (const auto& y : ry) {
      const Eigen::Matrix3d zy = z * y;
      // ⟨zy·x, T⟩ = ⟨x, (zy)ᵀT⟩ and ⟨zy·x·F, T⟩ = ⟨x, (zy)ᵀT·F⟩.
      const Eigen::Matrix3d proper = zy.transpose() * target;
      const Eigen::Matrix3d improper = proper * reflect;
      for (const auto& x : rx) {
        const double a = x.cwiseProduct(proper).sum();
        if (a > best) {
          best = a;
          best_q = zy * x;
        }
        const double b = x.cwiseProduct(improper).sum();
        if (b > best) {
          best = b;
          best_q = zy * x * reflect;
        }
      }
    }
  }
  Pose pose;
  pose.rotation = best_q;
  pose.unitary = true;
  return pose;
}

}  // namespace rigidloc
