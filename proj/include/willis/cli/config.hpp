#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "willis/material.hpp"
#include "willis/pwe_scalar.hpp"

namespace willis::cli {

// Anything wrong with the configuration file; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class WaveModel { scalar, elastic };

struct JobConfig {
  std::string text;  // raw file contents, hashed into the CSV metadata
  WaveModel model = WaveModel::scalar;
  std::variant<std::monostate, ScalarProfile, ElasticProfile> profile;
  int truncation = 16;
  FactorizationRule rule = FactorizationRule::automatic;
  int branches = 6;
  double k_start = 0.0;
  double k_stop = 3.141592653589793;
  int k_count = 50;
  Eigen::VectorXd direction;  // length d (scalar) or 3 (elastic)
  std::vector<double> points_omega;
  std::vector<Eigen::VectorXd> points_k;
  std::vector<int> branch_list;  // 1-based, empty means 1..branches
  std::vector<double> y0;
  int log_branch = 0;
  double tolerance = 1e-10;
  bool polish = false;

  int dimension() const;
  const ScalarProfile& scalar() const { return std::get<ScalarProfile>(profile); }
  const ElasticProfile& elastic() const { return std::get<ElasticProfile>(profile); }
};

// Reads an INI-style file with sections [lattice], [phases], [geometry], [job].
JobConfig load_config(const std::string& path);
JobConfig parse_config(const std::string& text);

// Scalar token: real, fraction a/b, or complex (re,im).
cplx parse_number(const std::string& token);

}  // namespace willis::cli
