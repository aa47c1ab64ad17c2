#include "geocd/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "geocd/error.hpp"
#include "geocd/eval.hpp"
#include "geocd/gbg.hpp"
#include "geocd/moments.hpp"
#include "geocd/percolation.hpp"
#include "geocd/rng.hpp"

namespace geocd {

namespace {

const std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::weak_recovery_sweep, "weak_recovery_sweep"},
    {ExperimentKind::exact_recovery_sweep, "exact_recovery_sweep"},
    {ExperimentKind::percolation_sweep, "percolation_sweep"},
    {ExperimentKind::distinguish, "distinguish"},
    {ExperimentKind::infoflow, "infoflow"},
    {ExperimentKind::thresholds, "thresholds"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x)) throw ValidationError(key, "not a number: '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ValidationError(key, "list must be nonempty");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError(key, "not an unsigned integer: '" + v + "'");
  try {
    return std::stoull(t);
  } catch (const std::out_of_range&) {
    throw ValidationError(key, "out of range");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError(key, "expected true or false");
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  throw ValidationError("experiment", "unknown experiment '" + name + "'");
}

void ExperimentConfig::set(const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  if (key == "experiment") {
    experiment = parse_experiment_kind(trim(value));
  } else if (key == "lambda") {
    lambda = parse_list(key, value);
  } else if (key == "n") {
    n = parse_list(key, value);
  } else if (key == "a") {
    a = parse_double(key, value);
  } else if (key == "b") {
    b = parse_double(key, value);
  } else if (key == "R") {
    R = parse_double(key, value);
  } else if (key == "R_out") {
    R_out = parse_double(key, value);
  } else if (key == "d") {
    d = static_cast<int>(parse_u64(key, value));
  } else if (key == "regime") {
    const std::string t = trim(value);
    if (t == "sparse" || t == "sparse_euclidean")
      regime = Regime::sparse_euclidean;
    else if (t == "log" || t == "log_torus")
      regime = Regime::log_torus;
    else
      throw ValidationError(key, "expected sparse or log");
  } else if (key == "epsilon") {
    epsilon = parse_double(key, value);
  } else if (key == "eta") {
    eta = parse_double(key, value);
  } else if (key == "trials") {
    trials = static_cast<std::size_t>(parse_u64(key, value));
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "out") {
    out = trim(value);
  } else if (key == "workers") {
    workers = static_cast<int>(parse_u64(key, value));
  } else if (key == "r") {
    r = parse_double(key, value);
  } else if (key == "window") {
    window = parse_double(key, value);
  } else if (key == "L") {
    L = parse_double(key, value);
  } else if (key == "gbg_R") {
    gbg_R = parse_double(key, value);
  } else if (key == "timing") {
    timing = parse_bool(key, value);
  } else {
    throw ValidationError(key, "unknown key");
  }
}

void ExperimentConfig::validate() const {
  if (lambda.empty()) throw ValidationError("lambda", "list must be nonempty");
  if (n.empty()) throw ValidationError("n", "list must be nonempty");
  if (!seed) throw ValidationError("seed", "a seed is mandatory");
  if (trials == 0) throw ValidationError("trials", "must be >= 1");
  if (d < 1 || d > kMaxDim) throw ValidationError("d", "must lie in [1, 8]");
  if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("a", "must lie in [0,1]");
  if (!(b >= 0.0 && b <= 1.0)) throw ValidationError("b", "must lie in [0,1]");
  if (b > a) throw ValidationError("b", "f_in must dominate f_out (b <= a)");
  if (!(R > 0.0)) throw ValidationError("R", "must be positive");
  if (R_out < 0.0) throw ValidationError("R_out", "must be >= 0");
  if (b > 0.0 && R_out > R) throw ValidationError("R_out", "f_in must dominate f_out (R_out <= R)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("epsilon", "must lie in (0, 1/2)");
  if (!(eta > 0.0 && eta < 0.5)) throw ValidationError("eta", "must lie in (0, 1/2)");
  if (experiment == ExperimentKind::infoflow && !(r > 0.0)) throw ValidationError("r", "must be positive");
  if (window < 0.0) throw ValidationError("window", "must be >= 0");
  if (gbg_R < 0.0) throw ValidationError("gbg_R", "must be >= 0");
  for (double x : lambda)
    if (!(x >= 0.0)) throw ValidationError("lambda", "must be >= 0");
  for (double x : n)
    if (!(x > 0.0)) throw ValidationError("n", "must be > 0");
  for (double x : n)
    for (double l : lambda) model(l, x).validate();
}

ModelParams ExperimentConfig::model(double lam, double nn) const {
  if (regime == Regime::log_torus) return ModelParams::log_regime(lam, a, b, d, nn);
  ModelParams p;
  p.lambda = lam;
  p.d = d;
  p.n = nn;
  p.f_in = ConnectionFunction::scaled_indicator(a, R);
  p.f_out = ConnectionFunction::scaled_indicator(b, R_out > 0.0 ? R_out : R);
  return p;
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(trim(line), "expected key=value");
    c.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path);
  return parse_config(is);
}

namespace {

struct Summary {
  double mean = 0.0;
  double se = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

class Sweep {
 public:
  explicit Sweep(const ExperimentConfig& c) : c_(c), eid_(static_cast<std::uint64_t>(c.experiment)) {}

  std::vector<ResultRow> run() {
    if (c_.experiment == ExperimentKind::percolation_sweep) {
      percolation();
      return std::move(rows_);
    }
    if (c_.experiment == ExperimentKind::thresholds) thresholds_global();
    std::size_t point = 0;
    for (double n : c_.n)
      for (double lam : c_.lambda) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t first = rows_.size();
        run_point(lam, n, point++);
        if (c_.timing) {
          const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          for (std::size_t k = first; k < rows_.size(); ++k) rows_[k].wall_ms = ms;
        }
      }
    return std::move(rows_);
  }

 private:
  std::uint64_t point_seed(std::size_t point) const { return derive_seed(*c_.seed, eid_, point); }
  std::uint64_t trial_seed(std::size_t point, std::size_t t) const { return derive_seed(*c_.seed, eid_, point, t); }

  void emit(double lam, double n, const std::string& metric, double value, double se, std::size_t trials) {
    ResultRow r;
    r.experiment = to_string(c_.experiment);
    r.lambda = lam;
    r.n = n;
    r.a = c_.a;
    r.b = c_.b;
    r.R = c_.R;
    r.R_out = c_.R_out > 0.0 ? c_.R_out : c_.R;
    r.d = c_.d;
    r.metric = metric;
    r.value = value;
    r.std_error = se;
    r.trials = trials;
    r.seed = *c_.seed;
    rows_.push_back(std::move(r));
  }

  GbgConfig gbg_config() const {
    GbgConfig g;
    g.R = c_.gbg_R;
    g.epsilon = c_.epsilon;
    return g;
  }

  void run_point(double lam, double n, std::size_t point) {
    switch (c_.experiment) {
      case ExperimentKind::weak_recovery_sweep: return weak(lam, n, point);
      case ExperimentKind::exact_recovery_sweep: return exact(lam, n, point);
      case ExperimentKind::distinguish: return distinguish(lam, n, point);
      case ExperimentKind::infoflow: return infoflow(lam, n, point);
      case ExperimentKind::thresholds: return thresholds_point(lam, n);
      case ExperimentKind::percolation_sweep: return;
    }
  }

  void weak(double lam, double n, std::size_t point) {
    const auto mp = c_.model(lam, n);
    const std::size_t T = c_.trials;
    std::vector<double> ov(T), good(T), giant(T);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < T; ++t) {
      const auto g = sample_coupled(mp, trial_seed(point, t), {}, false);
      const auto res = run_gbg(g, mp, gbg_config());
      ov[t] = overlap(res.estimates, g.points.labels);
      good[t] = res.stats.occupied_cells ? static_cast<double>(res.stats.a_good_cells) / static_cast<double>(res.stats.occupied_cells) : 0.0;
      giant[t] = g.size() ? static_cast<double>(res.stats.largest_component_nodes) / static_cast<double>(g.size()) : 0.0;
    }
    const auto o = summarize(ov), a = summarize(good), l = summarize(giant);
    emit(lam, n, "overlap", o.mean, o.se, T);
    emit(lam, n, "a_good_fraction", a.mean, a.se, T);
    emit(lam, n, "largest_component_fraction", l.mean, l.se, T);
  }

  void exact(double lam, double n, std::size_t point) {
    const auto mp = c_.model(lam, n);
    const std::size_t T = c_.trials;
    std::vector<double> ok(T), ov(T), fb(T);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < T; ++t) {
      const auto g = sample_coupled(mp, trial_seed(point, t), {}, false);
      const auto res = run_gbg(g, mp, gbg_config());
      ov[t] = overlap(res.estimates, g.points.labels);
      ok[t] = ov[t] == 1.0 ? 1.0 : 0.0;
      fb[t] = static_cast<double>(flip_bad_count(g, mp));
    }
    const auto s = summarize(ok), o = summarize(ov), f = summarize(fb);
    emit(lam, n, "exact_success", s.mean, s.se, T);
    emit(lam, n, "overlap", o.mean, o.se, T);
    emit(lam, n, "flip_bad_mean", f.mean, f.se, T);
    const std::size_t ct = std::max<std::size_t>(4000, 50 * T);
    const auto camp = campbell_flip_bad(mp, ct, derive_seed(point_seed(point), 0x63616dULL));
    emit(lam, n, "campbell_flip_bad", camp.mean, camp.std_error, ct);
    emit(lam, n, "er_threshold", exact_recovery_threshold(lam, c_.a, c_.b, c_.d), 0.0, 0);
  }

  void distinguish(double lam, double n, std::size_t point) {
    const auto mp = c_.model(lam, n);
    const double side = mp.window_side();
    const double L = c_.L > 0.0 ? c_.L : 0.5 * side - mp.f_in.support();
    const HSpec h = HSpec::standard(mp.f_in.support());
    const auto refs = triangle_deltas(mp.f_in, mp.f_out, lam, mp.d, h, kTriangleSamples, point_seed(point));
    const auto g_null = average(mp.f_in, mp.f_out);
    const std::size_t T = c_.trials;
    std::vector<double> correct(2 * T), sp(T), sn(T);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < T; ++t) {
      const auto gp = sample_coupled(mp, trial_seed(point, 2 * t), {}, false);
      const auto rp = detect_partitions(gp, L, h, mp, refs);
      const std::uint64_t ns = trial_seed(point, 2 * t + 1);
      const auto gn = sample_null(sample_points(mp, ns), g_null, mp.metric(), side, ns);
      const auto rn = detect_partitions(gn, L, h, mp, refs);
      correct[2 * t] = rp.decision == Decision::planted ? 1.0 : 0.0;
      correct[2 * t + 1] = rn.decision == Decision::null ? 1.0 : 0.0;
      sp[t] = rp.statistic;
      sn[t] = rn.statistic;
    }
    const auto acc = summarize(correct), p = summarize(sp), q = summarize(sn);
    emit(lam, n, "accuracy", acc.mean, acc.se, 2 * T);
    emit(lam, n, "statistic_planted", p.mean, p.se, T);
    emit(lam, n, "statistic_null", q.mean, q.se, T);
    emit(lam, n, "delta_g_ref", refs.delta_g, refs.stderr_g, kTriangleSamples);
    emit(lam, n, "delta_h_ref", refs.delta_h, refs.stderr_h, kTriangleSamples);
  }

  void infoflow(double lam, double n, std::size_t point) {
    auto mp = c_.model(lam, n);
    mp.regime = Regime::sparse_euclidean;
    const auto res = info_flow_experiment(mp, c_.r, c_.trials, point_seed(point));
    emit(lam, n, "success", res.success, res.success_stderr, res.trials);
    emit(lam, n, "reach", res.reach, res.reach_stderr, res.trials);
    emit(lam, n, "theta", res.theta, res.theta_stderr, res.trials);
    emit(lam, n, "bound_ok", res.bound_ok ? 1.0 : 0.0, 0.0, res.trials);
  }

  void thresholds_global() {
    const auto mp = c_.model(c_.lambda.front(), c_.n.front());
    const auto rep = threshold_report(mp.f_in, mp.f_out, c_.d, c_.epsilon, c_.eta);
    emit(0.0, 0.0, "lambda_lower", rep.lambda_lower, 0.0, 0);
    emit(0.0, 0.0, "lambda_upper", rep.lambda_upper, 0.0, 0);
    emit(0.0, 0.0, "chernoff_c", rep.chernoff_c, 0.0, 0);
    emit(0.0, 0.0, "peierls_lhs_at_upper", rep.peierls_lhs_at_upper, 0.0, 0);
  }

  void thresholds_point(double lam, double n) {
    emit(lam, n, "er_threshold", exact_recovery_threshold(lam, c_.a, c_.b, c_.d), 0.0, 0);
  }

  void percolation() {
    const auto mp = c_.model(c_.lambda.front(), c_.n.front());
    const auto g = difference(mp.f_in, mp.f_out);
    const double window = c_.window > 0.0 ? c_.window : 40.0 * std::max(g.support(), 1e-9);
    const auto est = theta_sweep(c_.lambda, g, c_.d, window, c_.trials, point_seed(0));
    for (const auto& e : est) emit(e.lambda, std::pow(window, c_.d), "theta", e.estimate, e.std_error, e.trials);
  }

  const ExperimentConfig& c_;
  std::uint64_t eid_;
  std::vector<ResultRow> rows_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.workers > 0) omp_set_num_threads(config.workers);
  return Sweep(config).run();
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.experiment << ',' << fmt(r.lambda) << ',' << fmt(r.n) << ',' << fmt(r.a) << ',' << fmt(r.b) << ','
       << fmt(r.R) << ',' << fmt(r.R_out) << ',' << r.d << ',' << r.metric << ',' << fmt(r.value) << ','
       << fmt(r.std_error) << ',' << r.trials << ',' << r.seed << ',' << fmt(r.wall_ms) << '\n';
}

void write_plot_data(std::ostream& os, const std::vector<ResultRow>& rows) {
  std::vector<std::pair<std::string, double>> keys;
  for (const auto& r : rows)
    if (std::find(keys.begin(), keys.end(), std::make_pair(r.metric, r.n)) == keys.end()) keys.emplace_back(r.metric, r.n);
  for (const auto& [metric, n] : keys) {
    os << "# metric=" << metric << " n=" << fmt(n) << '\n';
    for (const auto& r : rows)
      if (r.metric == metric && r.n == n) os << fmt(r.lambda) << ' ' << fmt(r.value) << ' ' << fmt(r.std_error) << '\n';
    os << '\n';
  }
}

void write_outputs(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream csv(path);
  if (!csv) throw IoError("cannot open " + path + " for writing");
  write_csv(csv, rows);
  std::ofstream plot(path + ".plot");
  if (!plot) throw IoError("cannot open " + path + ".plot for writing");
  write_plot_data(plot, rows);
  if (!csv || !plot) throw IoError("write failed: " + path);
}

}  // namespace geocd
