#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqn/csv.hpp"
#include "sqn/optim.hpp"

namespace sqn {

/// Full experiment description, as configured on the command line or in a
/// key=value config file.
struct RunConfig {
  std::string optimizer = "sgd";  // sgd | sqn | olbfgs
  std::string objective = "binary";  // binary | multiclass | quadratic

  std::string data_path;        // libsvm file
  std::vector<int> synthetic;   // {dim, count} when present

  // quadratic objective parameters
  int quad_dim = 10;
  double quad_curv_min = 1.0;
  double quad_curv_max = 4.0;
  double quad_noise = 1.0;
  int quad_examples = 1000;

  double sigma = 0.0;  // l2 regularization weight

  int b = 50;
  int bH = 1000;
  int L = 20;
  int M = 5;
  double beta = 1.0;
  double epsilon_curv = kDefaultCurvatureThreshold;

  std::optional<double> epochs;
  std::optional<long long> max_iters;

  std::uint64_t seed_data = 1;
  std::uint64_t seed_grad = 2;
  std::uint64_t seed_hess = 3;

  int checkpoint_every = 20;
  std::optional<double> split_fraction;
  bool monitor_errors = false;
  bool scale_work = false;
  std::string output = "run.csv";
  std::string dump_data;  // optional libsvm dump of the dataset
};

/// Raised when the arguments ask for --help; what() carries the help text.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates run flags (no program name).  Throws
/// std::runtime_error with a message on any violation.
RunConfig parse_config(const std::vector<std::string>& args);

/// Reads a key=value config file through the same option set.
RunConfig load_config_file(const std::string& path);

struct RunArtifacts {
  std::vector<RunRecord> records;  // rows as written to the CSV
  RunCounters counters;
  double final_train_fx = 0.0;
};

/// Builds the dataset and oracle described by cfg, runs the optimizer, and
/// writes the checkpoint CSV to cfg.output.
RunArtifacts execute_run(const RunConfig& cfg);

/// Runs both configurations (which must share the dataset seed), writes both
/// CSVs, and returns a two-line summary of final objective and adp.
std::string compare_runs(const RunConfig& a, const RunConfig& b);

}  // namespace sqn
