#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "rigidloc/geometry.hpp"
#include "rigidloc/preprocess.hpp"

namespace rigidloc {

enum class Method { kLS, kCLS, kCTLS };

std::string_view to_string(Method method);
/// Parses "LS", "CLS" or "CTLS" (case-insensitive).
std::optional<Method> parse_method(std::string_view text);

enum class LsSolvePath {
  kMatrix,     // [Q|t] = A_bar† D_bar C_e†
  kKronecker,  // vec([Q|t]) = (C_eᵀ ⊗ A_bar)† vec(D_bar)
};

struct EstimatorOptions {
  /// Flip the weakest singular direction so det(Q̂) = +1. Off by default:
  /// the unconstrained Procrustes answer may be a reflection.
  bool proper_rotation = false;
  LsSolvePath ls_path = LsSolvePath::kMatrix;
};

struct EstimateDiagnostics {
  double condition_number = 0.0;  // of the solved system
  Eigen::Index a_bar_rank = 0;
  Eigen::Index topology_rank = 0;  // rank(C_e) for LS, rank(C_bar) for CLS/CTLS
  bool degenerate = false;         // repeated or vanishing singular values in the Procrustes SVD
  bool reflection = false;         // det(Q̂) < 0
};

struct PoseEstimate {
  Pose pose;
  Method method = Method::kLS;
  Eigen::Vector3d column_norms = Eigen::Vector3d::Ones();
  EstimateDiagnostics diagnostics;
};

/// Joint unconstrained least squares over [Q | t]. Q̂ is generally not unitary.
/// Throws IdentifiabilityError when (M−1)N < 12, rank(A_bar) < 3 or rank(C_e) < 4.
PoseEstimate estimate_ls(const PreprocessedModel& model, const EstimatorOptions& options = {});

/// Unitarily constrained LS: orthogonal Procrustes on X = A_bar† D_tilde, then
/// t̂ = (1/N)(A_bar† D_bar − Q̂ C) 1.
PoseEstimate estimate_cls(const PreprocessedModel& model, const EstimatorOptions& options = {});

/// Unitarily constrained TLS. The constrained TLS problem has the same
/// minimizer as the constrained LS one, so this returns exactly estimate_cls's
/// pose, labelled CTLS.
PoseEstimate estimate_ctls(const PreprocessedModel& model, const EstimatorOptions& options = {});

PoseEstimate estimate(Method method, const PreprocessedModel& model,
                      const EstimatorOptions& options = {});

struct ProcrustesSolution {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d singular_values;
  bool degenerate = false;
};

/// argmin_Q ‖Q C_bar − X‖_F subject to QᵀQ = I, via the SVD C_bar Xᵀ = UΣVᵀ, Q = VUᵀ.
ProcrustesSolution solve_orthogonal_procrustes(const Eigen::Matrix3Xd& C_bar,
                                               const Eigen::Matrix3Xd& X,
                                               bool proper_rotation = false);

/// ‖Q C_bar − X‖_F.
double procrustes_objective(const Eigen::Matrix3d& Q, const Eigen::Matrix3Xd& C_bar,
                            const Eigen::Matrix3Xd& X);

/// Test oracle: exhaustive Euler-angle grid over SO(3) at `resolution_deg`,
/// repeated with a fixed reflection to cover O(3). Returns the grid minimizer
/// of ‖Q C_bar − X‖_F. resolution_deg must lie in (0, 30].
Pose oracle_procrustes_grid(const Eigen::Matrix3Xd& C_bar, const Eigen::Matrix3Xd& X,
                            double resolution_deg);

}  // namespace rigidloc
