#include "rigidloc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "rigidloc/errors.hpp"
#include "rigidloc/format.hpp"
#include "rigidloc/preprocess.hpp"

#ifndef RIGIDLOC_VERSION
#define RIGIDLOC_VERSION "unknown"
#endif

namespace rigidloc {

namespace {

constexpr std::uint64_t kFixedAnchorKey = std::numeric_limits<std::uint64_t>::max();
constexpr int kMaxRedraws = 1000;

struct TrialOutcome {
  std::vector<TrialRecord> records;
  std::optional<TrialMeasurements> measurements;
  std::size_t anchor_redraws = 0;
  bool measurement_failed = false;
};

struct SharedInputs {
  const ExperimentConfig& config;
  Pose truth;
  SensorPositions sensors;
  std::optional<AnchorSet> fixed_anchors;
  EstimatorOptions options;
  bool keep_measurements = false;
};

AnchorSet draw_spanning_anchors(const ExperimentConfig& config, RandomStream& rng,
                                std::size_t& redraws) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    AnchorSet anchors = draw_anchors(config.anchor_region, config.anchor_count, rng);
    // Fewer than four anchors can never span space; let the estimators report it.
    if (config.anchor_count < 4 || anchors_span_space(anchors)) return anchors;
    ++redraws;
  }
  throw Error("could not draw a non-coplanar anchor set in " + std::to_string(kMaxRedraws) +
              " attempts");
}

TrialRecord make_record(const SharedInputs& in, std::uint64_t trial, Method method,
                        double db, std::uint64_t seed_key) {
  TrialRecord rec;
  rec.trial_index = trial;
  rec.method = method;
  rec.truth = in.truth;
  rec.reference_range_db = db;
  rec.perturbation_std = in.config.perturbation_std;
  rec.seed_key = seed_key;
  return rec;
}

TrialOutcome run_trial(const SharedInputs& in, double db, std::uint64_t trial) {
  const ExperimentConfig& cfg = in.config;
  TrialOutcome out;

  RandomStream anchor_rng = RandomStream::substream(cfg.master_seed, trial, StreamPurpose::kAnchors);
  RandomStream noise_rng =
      RandomStream::substream(cfg.master_seed, trial, StreamPurpose::kRangeNoise);
  RandomStream perturb_rng =
      RandomStream::substream(cfg.master_seed, trial, StreamPurpose::kPerturbation);

  const AnchorSet anchors = in.fixed_anchors
                                ? *in.fixed_anchors
                                : draw_spanning_anchors(cfg, anchor_rng, out.anchor_redraws);
  const Topology known = perturb_topology(cfg.topology, cfg.perturbation_std, perturb_rng);
  const NoiseModel noise{db, cfg.perturbation_std};

  RangeSet ranges = simulate_ranges(anchors, in.sensors, noise, noise_rng, cfg.per_sensor_noise);
  std::optional<PreprocessedModel> model;
  std::string failure;
  try {
    model = build_model(square_ranges(ranges), anchors, whitening_matrix(ranges), known);
  } catch (const MeasurementError& e) {
    out.measurement_failed = true;
    failure = e.what();
  }

  for (Method method : cfg.methods) {
    TrialRecord rec = make_record(in, trial, method, db, noise_rng.key());
    if (!model) {
      rec.failure = "trial aborted: " + failure;
    } else {
      try {
        rec.estimate = estimate(method, *model, in.options);
      } catch (const Error& e) {
        rec.failure = e.what();
      }
    }
    out.records.push_back(std::move(rec));
  }
  if (in.keep_measurements) {
    out.measurements = TrialMeasurements{trial, anchors, std::move(ranges)};
  }
  return out;
}

MethodSummary summarize(Method method, const std::vector<TrialRecord>& records) {
  MethodSummary s;
  s.method = method;
  for (const auto& r : records) (r.ok() ? s.n_ok : s.n_failed) += 1;
  s.mean_angular_error_deg = mean_angular_error(records);
  s.rmse_translation_m = rmse_translation(records);
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::string reals_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_real(v[i]);
  }
  return out;
}

}  // namespace

const MethodSummary& SweepPoint::summary(Method method) const {
  for (const auto& s : summaries) {
    if (s.method == method) return s;
  }
  throw InvalidArgument("method " + std::string(to_string(method)) + " was not run");
}

std::vector<TrialRecord> SweepPoint::records_for(Method method) const {
  std::vector<TrialRecord> out;
  for (const auto& r : records) {
    if (r.method == method) out.push_back(r);
  }
  return out;
}

AnchorSet draw_anchors(const AnchorRegion& region, int count, RandomStream& rng) {
  if (count < 2) throw InvalidArgument("need at least two anchors");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Matrix3Xd a(3, count);
  for (int m = 0; m < count; ++m) {
    for (int k = 0; k < 3; ++k) {
      a(k, m) = region.lower(k) + (region.upper(k) - region.lower(k)) * unit(rng);
    }
  }
  return AnchorSet(std::move(a));
}

bool anchors_span_space(const AnchorSet& anchors) {
  // rank(U_Mᵀ W Aᵀ) = 3 iff no direction x has Aᵀx ∝ 1, i.e. rank([Aᵀ 1]) = 4.
  Eigen::MatrixXd affine(anchors.anchor_count(), 4);
  affine.leftCols<3>() = anchors.positions().transpose();
  affine.col(3).setOnes();
  return numerical_rank(affine) == 4;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const ExecutionOptions& execution) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  SharedInputs in{config, config.truth(), {}, std::nullopt, {}, execution.keep_measurements};
  in.sensors = apply_pose(config.topology, in.truth);
  in.options.proper_rotation = config.proper_rotation;
  in.options.ls_path = config.ls_path;
  if (config.anchor_mode == AnchorMode::kFixed) {
    RandomStream rng =
        RandomStream::substream(config.master_seed, kFixedAnchorKey, StreamPurpose::kAnchors);
    in.fixed_anchors = draw_spanning_anchors(config, rng, report.anchor_redraws);
  }

  const std::size_t n_points = config.reference_range_db_sweep.size();
  const auto n_exp = static_cast<std::size_t>(config.n_exp);
  std::vector<std::optional<TrialOutcome>> outcomes(n_points * n_exp);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t task = next++; task < outcomes.size() && !failed; task = next++) {
      try {
        outcomes[task] = run_trial(in, config.reference_range_db_sweep[task / n_exp],
                                   static_cast<std::uint64_t>(task % n_exp));
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  unsigned threads = execution.threads == 0 ? std::thread::hardware_concurrency() : execution.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(outcomes.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Ordered reduction by (sweep point, trial).
  for (std::size_t p = 0; p < n_points; ++p) {
    SweepPoint point;
    point.reference_range_db = config.reference_range_db_sweep[p];
    for (std::size_t t = 0; t < n_exp; ++t) {
      TrialOutcome& o = *outcomes[p * n_exp + t];
      if (config.anchor_mode == AnchorMode::kPerTrial && p == 0) {
        report.anchor_redraws += o.anchor_redraws;
      }
      if (o.measurement_failed) ++report.measurement_failures;
      for (auto& r : o.records) {
        if (!r.ok() && !o.measurement_failed) ++report.estimator_failures;
        point.records.push_back(std::move(r));
      }
      if (o.measurements) point.measurements.push_back(std::move(*o.measurements));
    }
    for (Method m : config.methods) point.summaries.push_back(summarize(m, point.records_for(m)));
    report.points.push_back(std::move(point));
  }
  return report;
}

std::string summary_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << kSummaryHeader << "\n";
  for (const auto& p : report.points) {
    for (const auto& s : p.summaries) {
      out << format_real(p.reference_range_db) << ',' << to_string(s.method) << ','
          << format_real(report.config.perturbation_std) << ',' << s.n_ok << ','
          << format_real(s.mean_angular_error_deg) << ',' << format_real(s.rmse_translation_m)
          << "\n";
    }
  }
  return out.str();
}

std::string trials_csv(const ExperimentReport& report) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream out;
  out << kTrialsHeader << "\n";
  for (const auto& p : report.points) {
    for (const auto& r : p.records) {
      out << r.trial_index << ',' << to_string(r.method) << ','
          << format_real(r.reference_range_db) << ',' << format_real(r.perturbation_std);
      const Eigen::Matrix3d& q = r.estimate.pose.rotation;
      for (int c = 0; c < 3; ++c) {
        for (int row = 0; row < 3; ++row) out << ',' << format_real(r.ok() ? q(row, c) : nan);
      }
      for (int k = 0; k < 3; ++k) {
        out << ',' << format_real(r.ok() ? r.estimate.pose.translation(k) : nan);
      }
      const double angle =
          r.ok() ? column_angle_error(r.truth.rotation, q).mean_deg : nan;
      const double terr = r.ok() ? translation_error(r.truth, r.estimate.pose) : nan;
      out << ',' << format_real(angle) << ',' << format_real(terr) << "\n";
    }
  }
  return out.str();
}

std::string measurements_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << kMeasurementsHeader << "\n";
  for (const auto& p : report.points) {
    for (const auto& tm : p.measurements) {
      const auto& a = tm.anchors.positions();
      const Eigen::MatrixXd& measured = tm.ranges.ranges;
      for (Eigen::Index n = 0; n < measured.cols(); ++n) {
        for (Eigen::Index m = 0; m < measured.rows(); ++m) {
          out << format_real(p.reference_range_db) << ',' << tm.trial_index << ',' << m << ','
              << n << ',' << format_real(a(0, m)) << ',' << format_real(a(1, m)) << ','
              << format_real(a(2, m)) << ','
              << format_real(tm.ranges.true_ranges ? (*tm.ranges.true_ranges)(m, n)
                                                   : std::numeric_limits<double>::quiet_NaN())
              << ',' << format_real(measured(m, n)) << "\n";
        }
      }
    }
  }
  return out.str();
}

std::string manifest_text(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  std::ostringstream out;
  out << "code_version=" << RIGIDLOC_VERSION << "\n";
  out << "master_seed=" << c.master_seed << "\n";
  out << "euler_convention=" << kEulerConvention << "\n";
  out << "truth_euler_deg="
      << reals_text({c.truth_euler.alpha_x, c.truth_euler.beta_y, c.truth_euler.gamma_z}) << "\n";
  out << "truth_translation_m="
      << reals_text({c.truth_translation.x(), c.truth_translation.y(), c.truth_translation.z()})
      << "\n";
  out << "anchor_mode=" << to_string(c.anchor_mode) << "\n";
  out << "anchor_count=" << c.anchor_count << "\n";
  out << "anchor_region_m="
      << reals_text({c.anchor_region.lower.x(), c.anchor_region.lower.y(),
                     c.anchor_region.lower.z(), c.anchor_region.upper.x(),
                     c.anchor_region.upper.y(), c.anchor_region.upper.z()})
      << "\n";
  const auto& topo = c.topology.coords();
  out << "topology_m=" << reals_text(std::vector<double>(topo.data(), topo.data() + topo.size()))
      << " (column-major 3xN)\n";
  out << "reference_range_db_sweep=" << reals_text(c.reference_range_db_sweep) << "\n";
  out << "n_exp=" << c.n_exp << "\n";
  out << "perturbation_std_m=" << format_real(c.perturbation_std) << "\n";
  out << "methods=";
  for (std::size_t i = 0; i < c.methods.size(); ++i) out << (i ? "," : "") << to_string(c.methods[i]);
  out << "\n";
  out << "per_sensor_noise=" << (c.per_sensor_noise ? "true" : "false") << "\n";
  out << "proper_rotation=" << (c.proper_rotation ? "true" : "false") << "\n";
  out << "ls_solve=" << (c.ls_path == LsSolvePath::kKronecker ? "kronecker" : "matrix") << "\n";
  out << "rng=splitmix64 substreams keyed by (master_seed, trial, purpose)\n";
  out << "anchor_redraws=" << report.anchor_redraws << "\n";
  out << "measurement_failures=" << report.measurement_failures << "\n";
  out << "estimator_failures=" << report.estimator_failures << "\n";
  return out.str();
}

void export_csv(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "summary.csv", summary_csv(report));
  write_file(out_dir / "trials.csv", trials_csv(report));
  write_file(out_dir / "manifest.txt", manifest_text(report));
  bool any_measurements = false;
  for (const auto& p : report.points) any_measurements = any_measurements || !p.measurements.empty();
  if (any_measurements) write_file(out_dir / "measurements.csv", measurements_csv(report));
}

std::vector<ValidationCheck> validate_identifiability(const ExperimentConfig& config) {
  std::vector<ValidationCheck> checks;
  const Eigen::Index m = config.anchor_count;
  const Eigen::Index n = config.topology.sensor_count();
  const bool wants_ls =
      std::find(config.methods.begin(), config.methods.end(), Method::kLS) != config.methods.end();

  checks.push_back({"equation count (M-1)N >= 12", (m - 1) * n >= 12,
                    "(M-1)N = " + std::to_string((m - 1) * n)});
  checks.push_back({"anchor count M >= 4", m >= 4, "M = " + std::to_string(m)});

  const Eigen::Index ce_rank = numerical_rank(config.topology.extended());
  checks.push_back({"rank([C; 1^T]) = 4", ce_rank == 4 || !wants_ls,
                    "rank = " + std::to_string(ce_rank) + (wants_ls ? "" : " (LS not enabled)")});
  if (n >= 2) {
    const Eigen::MatrixXd c_bar =
        config.topology.coords() * nullspace_basis(Eigen::VectorXd::Ones(n));
    const Eigen::Index rank = numerical_rank(c_bar);
    checks.push_back({"rank(C U_N) = 3", rank == 3, "rank = " + std::to_string(rank)});
  }

  if (m >= 2) {
    RandomStream rng = RandomStream::substream(
        config.master_seed, config.anchor_mode == AnchorMode::kFixed ? kFixedAnchorKey : 0,
        StreamPurpose::kAnchors);
    const AnchorSet anchors = draw_anchors(config.anchor_region, static_cast<int>(m), rng);
    const bool spans = anchors_span_space(anchors);
    checks.push_back({"sample anchor deployment spans 3-D", spans,
                      spans ? "first deployment is non-coplanar"
                            : "first deployment is coplanar (rank(A_bar) < 3)"});
  }
  return checks;
}

}  // namespace rigidloc
