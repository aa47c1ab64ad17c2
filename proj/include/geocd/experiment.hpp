#pragma once

// Declarative parameter sweeps: a flat key=value config in, CSV rows and
// plot data out.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geocd/model.hpp"

namespace geocd {

enum class ExperimentKind {
  weak_recovery_sweep,
  exact_recovery_sweep,
  percolation_sweep,
  distinguish,
  infoflow,
  thresholds,
};

std::string to_string(ExperimentKind k);
/// Throws ValidationError("experiment", ...) for unknown names.
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::weak_recovery_sweep;
  std::vector<double> lambda;
  std::vector<double> n;
  double a = 1.0;
  double b = 0.0;
  double R = 1.0;      ///< support of f_in
  double R_out = 0.0;  ///< support of f_out; 0 means R
  int d = 2;
  Regime regime = Regime::sparse_euclidean;
  double epsilon = 0.1;
  double eta = 0.05;
  std::size_t trials = 20;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;  ///< 0 keeps the OpenMP default
  double r = 5.0;       ///< info-flow reveal radius
  double window = 0.0;  ///< percolation window side; 0 means 40 support radii
  double L = 0.0;       ///< distinguish radius; 0 means half the window minus R
  double gbg_R = 0.0;   ///< GBG tessellation scale; 0 means the support
  bool timing = false;  ///< fill wall_ms (breaks byte-for-byte reproducibility)

  /// Applies one key=value assignment. Throws ValidationError naming the key.
  void set(const std::string& key, const std::string& value);
  /// Throws ValidationError naming the first offending field.
  void validate() const;

  /// Model parameters at one sweep point.
  ModelParams model(double lambda, double n) const;
};

/// Parses "key = value" lines; '#' starts a comment.
ExperimentConfig parse_config(std::istream& is);
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string experiment;
  double lambda = 0.0;
  double n = 0.0;
  double a = 0.0;
  double b = 0.0;
  double R = 0.0;
  double R_out = 0.0;
  int d = 0;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

/// Runs the Cartesian sweep lambda × n. Rows are ordered by (n, lambda,
/// metric) and do not depend on the worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader = "experiment,lambda,n,a,b,R,R_out,d,metric,value,stderr,trials,seed,wall_ms";

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// Blocks of "x y yerr" lines (x = lambda), one block per (metric, n).
void write_plot_data(std::ostream& os, const std::vector<ResultRow>& rows);

/// Writes `path` and `path + ".plot"`. Throws IoError.
void write_outputs(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace geocd
