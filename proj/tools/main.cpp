// geocd: sampling, clustering and sweep driver.

#include <CLI11.hpp>

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "geocd/error.hpp"
#include "geocd/eval.hpp"
#include "geocd/experiment.hpp"
#include "geocd/gbg.hpp"
#include "geocd/graph_io.hpp"
#include "geocd/moments.hpp"
#include "geocd/percolation.hpp"
#include "geocd/rng.hpp"

namespace {

using namespace geocd;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key=value config file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output path");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--set", f.sets, "config override key=value (repeatable)");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError(kv, "expected key=value");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (f.workers > 0) c.workers = f.workers;
  if (c.lambda.empty()) c.lambda = {1.0};
  if (c.n.empty()) c.n = {1.0e4};
  if (c.workers > 0) omp_set_num_threads(c.workers);
  return c;
}

void emit_rows(const ExperimentConfig& c, const std::vector<ResultRow>& rows) {
  if (c.out.empty())
    write_csv(std::cout, rows);
  else
    write_outputs(c.out, rows);
}

int cmd_generate(const CommonFlags& f) {
  auto c = build_config(f);
  c.validate();
  const auto mp = c.model(c.lambda.front(), c.n.front());
  const auto g = sample_coupled(mp, *c.seed);
  if (c.out.empty())
    write_graph(std::cout, g);
  else
    write_graph_file(c.out, g);
  return 0;
}

int cmd_gbg(const CommonFlags& f, const std::string& input) {
  auto c = build_config(f);
  c.validate();
  const auto mp = c.model(c.lambda.front(), c.n.front());
  const SpatialGraph g = input.empty() ? sample_coupled(mp, *c.seed, {}, false) : read_graph_file(input);
  GbgConfig gc;
  gc.R = c.gbg_R;
  gc.epsilon = c.epsilon;
  const auto res = run_gbg(g, mp, gc);
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw IoError("cannot open " + c.out + " for writing");
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  for (std::size_t i = 0; i < res.estimates.size(); ++i) os << i << ' ' << static_cast<int>(res.estimates[i]) << '\n';
  os << "# nodes=" << g.size() << " occupied_cells=" << res.stats.occupied_cells
     << " a_good_cells=" << res.stats.a_good_cells << " components=" << res.stats.components
     << " largest_component_nodes=" << res.stats.largest_component_nodes
     << " overlap=" << overlap(res.estimates, g.points.labels) << '\n';
  if (!os) throw IoError("write failed");
  return 0;
}

int cmd_experiment(const CommonFlags& f, std::optional<ExperimentKind> kind) {
  auto c = build_config(f);
  if (kind) c.experiment = *kind;
  emit_rows(c, run_experiment(c));
  return 0;
}

int cmd_flipbad(const CommonFlags& f) {
  auto c = build_config(f);
  c.experiment = ExperimentKind::exact_recovery_sweep;
  auto rows = run_experiment(c);
  std::erase_if(rows, [](const ResultRow& r) {
    return r.metric != "flip_bad_mean" && r.metric != "campbell_flip_bad" && r.metric != "er_threshold";
  });
  emit_rows(c, rows);
  return 0;
}

int cmd_percolation(const CommonFlags& f) {
  auto c = build_config(f);
  c.experiment = ExperimentKind::percolation_sweep;
  c.validate();
  const auto mp = c.model(c.lambda.front(), c.n.front());
  const auto g = difference(mp.f_in, mp.f_out);
  const double window = c.window > 0.0 ? c.window : 40.0 * std::max(g.support(), 1e-9);
  const auto est = theta_sweep(c.lambda, g, c.d, window, c.trials, derive_seed(*c.seed, 0ULL));
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw IoError("cannot open " + c.out + " for writing");
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  os << "lambda,estimate,stderr,window,trials,seed\n";
  char buf[160];
  for (const auto& e : est) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu,%llu\n", e.lambda, e.estimate, e.std_error, e.window,
                  e.trials, static_cast<unsigned long long>(e.seed));
    os << buf;
  }
  if (!os) throw IoError("write failed");
  return 0;
}

int cmd_thresholds(const CommonFlags& f) {
  auto c = build_config(f);
  if (!c.seed) c.seed = 0;
  c.experiment = ExperimentKind::thresholds;
  c.validate();
  const auto mp = c.model(c.lambda.front(), c.n.front());
  const auto rep = threshold_report(mp.f_in, mp.f_out, c.d, c.epsilon, c.eta);
  std::printf("lambda_lower=%.17g\nlambda_upper=%.17g\npeierls_lhs_at_upper=%.17g\nchernoff_c=%.17g\n",
              rep.lambda_lower, rep.lambda_upper, rep.peierls_lhs_at_upper, rep.chernoff_c);
  for (double lam : c.lambda)
    std::printf("er_threshold[lambda=%.17g]=%.17g\n", lam, exact_recovery_threshold(lam, c.a, c.b, c.d));
  if (!c.out.empty()) write_outputs(c.out, run_experiment(c));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planted partition random connection model toolkit"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string input;

  auto* generate = app.add_subcommand("generate", "sample a coupled (G, I) graph");
  auto* gbg = app.add_subcommand("gbg", "run Good-Bad-Grid clustering");
  gbg->add_option("--input", input, "geograph v1 file (samples fresh when omitted)");
  auto* sweep = app.add_subcommand("sweep", "run the experiment named in the config");
  auto* percolation = app.add_subcommand("percolation", "coupled percolation probability sweep");
  auto* distinguish = app.add_subcommand("distinguish", "planted versus null triangle test");
  auto* flipbad = app.add_subcommand("flipbad", "Flip-Bad counts and their first-moment prediction");
  auto* infoflow = app.add_subcommand("infoflow", "information flow from infinity");
  auto* thresholds = app.add_subcommand("thresholds", "analytic thresholds");
  for (auto* cmd : {generate, gbg, sweep, percolation, distinguish, flipbad, infoflow, thresholds})
    add_common(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (generate->parsed()) return cmd_generate(flags);
    if (gbg->parsed()) return cmd_gbg(flags, input);
    if (sweep->parsed()) return cmd_experiment(flags, std::nullopt);
    if (percolation->parsed()) return cmd_percolation(flags);
    if (distinguish->parsed()) return cmd_experiment(flags, ExperimentKind::distinguish);
    if (flipbad->parsed()) return cmd_flipbad(flags);
    if (infoflow->parsed()) return cmd_experiment(flags, ExperimentKind::infoflow);
    if (thresholds->parsed()) return cmd_thresholds(flags);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CorruptInputError& e) {
    std::cerr << "corrupt input: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
