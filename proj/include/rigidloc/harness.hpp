#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rigidloc/config.hpp"
#include "rigidloc/measurement.hpp"
#include "rigidloc/metrics.hpp"

namespace rigidloc {

struct ExecutionOptions {
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
  /// Keep every simulated RangeSet so it can be written to measurements.csv.
  bool keep_measurements = false;
};

struct MethodSummary {
  Method method = Method::kLS;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mean_angular_error_deg = 0.0;
  double rmse_translation_m = 0.0;
};

struct TrialMeasurements {
  std::uint64_t trial_index = 0;
  AnchorSet anchors;
  RangeSet ranges;
};

struct SweepPoint {
  double reference_range_db = 0.0;
  std::vector<MethodSummary> summaries;     // one per configured method, in config order
  std::vector<TrialRecord> records;         // trial-major, then method in config order
  std::vector<TrialMeasurements> measurements;  // filled only with keep_measurements

  const MethodSummary& summary(Method method) const;
  std::vector<TrialRecord> records_for(Method method) const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SweepPoint> points;  // in sweep order
  std::size_t anchor_redraws = 0;  // coplanar anchor draws replaced
  std::size_t measurement_failures = 0;  // trials aborted: a measured range to sensor 1 was <= 0
  std::size_t estimator_failures = 0;    // failed estimates in trials that were not aborted
};

/// Anchors drawn i.i.d. uniformly from the region.
AnchorSet draw_anchors(const AnchorRegion& region, int count, RandomStream& rng);

/// True when the anchors do not all lie on one plane, i.e. A_bar can have rank 3.
bool anchors_span_space(const AnchorSet& anchors);

/// Seeded Monte-Carlo sweep. Every trial t of sweep point k uses substreams
/// keyed by (master_seed, t), shared across sweep points and across runs that
/// differ only in perturbation_std, so curves are compared on common draws.
/// Output is identical for any thread count.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const ExecutionOptions& execution = {});

inline constexpr const char* kSummaryHeader =
    "ref_range_db,method,perturbation_std_m,n_exp,mean_angular_error_deg,rmse_translation_m";
inline constexpr const char* kTrialsHeader =
    "trial,method,ref_range_db,perturbation_std_m,"
    "q00,q10,q20,q01,q11,q21,q02,q12,q22,t_x,t_y,t_z,angular_error_deg,translation_error_m";
inline constexpr const char* kMeasurementsHeader =
    "ref_range_db,trial,anchor,sensor,anchor_x,anchor_y,anchor_z,true_range_m,measured_range_m";

/// Writes summary.csv, trials.csv and manifest.txt into `out_dir` (created if
/// missing), plus measurements.csv when the report carries measurements.
void export_csv(const ExperimentReport& report, const std::filesystem::path& out_dir);

std::string summary_csv(const ExperimentReport& report);
std::string trials_csv(const ExperimentReport& report);
std::string measurements_csv(const ExperimentReport& report);
std::string manifest_text(const ExperimentReport& report);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Identifiability checks for a config: equation count, topology ranks,
/// anchor count and a sample anchor deployment.
std::vector<ValidationCheck> validate_identifiability(const ExperimentConfig& config);

}  // namespace rigidloc
