#include "rigidloc/config.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rigidloc/errors.hpp"
#include "rigidloc/format.hpp"

namespace rigidloc {

namespace {

double as_real(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw InvalidArgument(key + ": expected a number");
  const std::string s = node.Scalar();
  if (s == "inf" || s == "+inf" || s == ".inf" || s == "+.inf" || s == "Inf" || s == ".Inf") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(key + ": '" + s + "' is not a number");
  }
}

std::vector<double> as_reals(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw InvalidArgument(key + ": expected a list");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(as_real(item, key));
  return out;
}

Eigen::Vector3d as_vec3(const YAML::Node& node, const std::string& key) {
  const auto v = as_reals(node, key);
  if (v.size() != 3) throw InvalidArgument(key + ": expected 3 entries");
  return {v[0], v[1], v[2]};
}

std::vector<std::vector<double>> as_rows(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw InvalidArgument(key + ": expected a nested list");
  std::vector<std::vector<double>> rows;
  for (const auto& row : node) rows.push_back(as_reals(row, key));
  return rows;
}

template <typename T>
T as_scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InvalidArgument(key + ": unexpected value '" +
                          (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
  }
}

std::string join_reals(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

std::string vec3_text(const Eigen::Vector3d& v) { return join_reals({v.x(), v.y(), v.z()}); }

}  // namespace

std::string_view to_string(AnchorMode mode) {
  return mode == AnchorMode::kFixed ? "fixed" : "per_trial";
}

Topology default_topology() {
  Eigen::Matrix3Xd c(3, 6);
  c << 1, 6, 7, 6, 2, 2.5,
       0, 0, 5, 5, 5, 2.5,
       0, 0, 0, 0, 0, 5;
  return Topology(c);
}

void ExperimentConfig::validate() const {
  if (anchor_count < 2) throw InvalidArgument("anchor_count must be >= 2");
  if (uses_constrained_estimator() && anchor_count < 4) {
    throw InvalidArgument("anchor_count must be >= 4 when CLS or CTLS is enabled");
  }
  if (topology.sensor_count() < 2) throw InvalidArgument("topology needs at least two sensors");
  if (n_exp < 1) throw InvalidArgument("n_exp must be >= 1");
  if (reference_range_db_sweep.empty()) {
    throw InvalidArgument("reference_range_db_sweep must not be empty");
  }
  for (double db : reference_range_db_sweep) {
    if (std::isnan(db) || db == -std::numeric_limits<double>::infinity()) {
      throw InvalidArgument("reference ranges must be finite or +inf");
    }
  }
  if (!(perturbation_std >= 0.0) || !std::isfinite(perturbation_std)) {
    throw InvalidArgument("perturbation_std must be finite and non-negative");
  }
  if (methods.empty()) throw InvalidArgument("methods must not be empty");
  if (!((anchor_region.upper - anchor_region.lower).array() > 0.0).all()) {
    throw InvalidArgument("anchor_region must have positive extent along every axis");
  }
  if (!truth_translation.allFinite()) throw InvalidArgument("truth_translation must be finite");
  pose_from_euler(truth_euler);
}

Pose ExperimentConfig::truth() const {
  Pose pose = pose_from_euler(truth_euler);
  pose.translation = truth_translation;
  return pose;
}

bool ExperimentConfig::uses_constrained_estimator() const {
  for (Method m : methods) {
    if (m != Method::kLS) return true;
  }
  return false;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(std::string("config is not well-formed: ") + e.what());
  }
  ExperimentConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw InvalidArgument("config must be a key/value mapping");

  for (const auto& entry : root) {
    const std::string key = entry.first.as<std::string>();
    const YAML::Node& value = entry.second;
    if (key == "topology") {
      const auto rows = as_rows(value, key);
      if (rows.size() != 3 || rows[0].empty()) {
        throw InvalidArgument("topology: expected 3 rows");
      }
      Eigen::Matrix3Xd c(3, static_cast<Eigen::Index>(rows[0].size()));
      for (int r = 0; r < 3; ++r) {
        if (rows[r].size() != rows[0].size()) {
          throw InvalidArgument("topology: rows differ in length");
        }
        for (std::size_t n = 0; n < rows[r].size(); ++n) c(r, static_cast<Eigen::Index>(n)) = rows[r][n];
      }
      cfg.topology = Topology(c);
    } else if (key == "anchor_count") {
      cfg.anchor_count = as_scalar<int>(value, key);
    } else if (key == "anchor_region") {
      const auto rows = as_rows(value, key);
      if (rows.size() != 2 || rows[0].size() != 3 || rows[1].size() != 3) {
        throw InvalidArgument("anchor_region: expected [[xmin, ymin, zmin], [xmax, ymax, zmax]]");
      }
      cfg.anchor_region.lower = {rows[0][0], rows[0][1], rows[0][2]};
      cfg.anchor_region.upper = {rows[1][0], rows[1][1], rows[1][2]};
    } else if (key == "truth_euler") {
      const Eigen::Vector3d e = as_vec3(value, key);
      cfg.truth_euler = {e.x(), e.y(), e.z()};
    } else if (key == "truth_translation") {
      cfg.truth_translation = as_vec3(value, key);
    } else if (key == "reference_range_db_sweep") {
      cfg.reference_range_db_sweep = as_reals(value, key);
    } else if (key == "n_exp") {
      cfg.n_exp = as_scalar<int>(value, key);
    } else if (key == "perturbation_std") {
      cfg.perturbation_std = as_real(value, key);
    } else if (key == "master_seed") {
      cfg.master_seed = as_scalar<std::uint64_t>(value, key);
    } else if (key == "methods") {
      if (!value.IsSequence()) throw InvalidArgument("methods: expected a list");
      cfg.methods.clear();
      std::set<Method> seen;
      for (const auto& item : value) {
        const auto name = as_scalar<std::string>(item, key);
        const auto m = parse_method(name);
        if (!m) throw InvalidArgument("methods: unknown estimator '" + name + "'");
        if (seen.insert(*m).second) cfg.methods.push_back(*m);
      }
    } else if (key == "anchor_mode") {
      const auto mode = as_scalar<std::string>(value, key);
      if (mode == "per_trial") {
        cfg.anchor_mode = AnchorMode::kPerTrial;
      } else if (mode == "fixed") {
        cfg.anchor_mode = AnchorMode::kFixed;
      } else {
        throw InvalidArgument("anchor_mode: expected per_trial or fixed, got '" + mode + "'");
      }
    } else if (key == "per_sensor_noise") {
      cfg.per_sensor_noise = as_scalar<bool>(value, key);
    } else if (key == "proper_rotation") {
      cfg.proper_rotation = as_scalar<bool>(value, key);
    } else if (key == "ls_solve") {
      const auto path = as_scalar<std::string>(value, key);
      if (path == "matrix") {
        cfg.ls_path = LsSolvePath::kMatrix;
      } else if (path == "kronecker") {
        cfg.ls_path = LsSolvePath::kKronecker;
      } else {
        throw InvalidArgument("ls_solve: expected matrix or kronecker, got '" + path + "'");
      }
    } else {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

std::string dump_config(const ExperimentConfig& config) {
  std::ostringstream out;
  const auto& c = config.topology.coords();
  out << "topology: [";
  for (int r = 0; r < 3; ++r) {
    if (r) out << ", ";
    std::vector<double> row(c.row(r).begin(), c.row(r).end());
    out << join_reals(row);
  }
  out << "]\n";
  out << "anchor_count: " << config.anchor_count << "\n";
  out << "anchor_region: [" << vec3_text(config.anchor_region.lower) << ", "
      << vec3_text(config.anchor_region.upper) << "]\n";
  out << "truth_euler: "
      << join_reals({config.truth_euler.alpha_x, config.truth_euler.beta_y,
                     config.truth_euler.gamma_z})
      << "\n";
  out << "truth_translation: " << vec3_text(config.truth_translation) << "\n";
  out << "reference_range_db_sweep: " << join_reals(config.reference_range_db_sweep) << "\n";
  out << "n_exp: " << config.n_exp << "\n";
  out << "perturbation_std: " << format_real(config.perturbation_std) << "\n";
  out << "master_seed: " << config.master_seed << "\n";
  out << "methods: [";
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    if (i) out << ", ";
    out << to_string(config.methods[i]);
  }
  out << "]\n";
  out << "anchor_mode: " << to_string(config.anchor_mode) << "\n";
  out << "per_sensor_noise: " << (config.per_sensor_noise ? "true" : "false") << "\n";
  out << "proper_rotation: " << (config.proper_rotation ? "true" : "false") << "\n";
  out << "ls_solve: " << (config.ls_path == LsSolvePath::kKronecker ? "kronecker" : "matrix")
      << "\n";
  return out.str();
}

}  // namespace rigidloc
