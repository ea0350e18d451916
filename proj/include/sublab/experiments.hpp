#pragma once
// Experiment runners behind the command-line tool. Each command resolves its
// configuration, writes its data files into the output directory and returns
// the flat records it wrote to <out>/<command>.jsonl.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sublab/graph.hpp"
#include "sublab/io.hpp"
#include "sublab/subset.hpp"

namespace sublab {

struct ExperimentConfig {
  std::string command;
  std::uint64_t n = 0;
  std::uint64_t k = 0;                 // 0: round(k_frac·n)
  std::optional<std::uint64_t> m;      // G(n, M)
  std::optional<double> p;             // G(n, p); also the window model's p
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;
  unsigned workers = 1;
  double beta = 1.0 / 14;
  double eps = 0.05;
  double window = 2;                   // in units of σ
  std::string graph;                   // input graph file instead of generation
  std::string out = ".";               // output directory
  std::uint64_t budget = kDefaultExactBudget;
  std::uint32_t t = 0;                 // extra-set size for the binomial window
  std::string mode = "uniform-T";
  std::uint64_t outer = 200;
  std::vector<std::uint64_t> grid;
  std::uint64_t seeds = 5;
  std::string metric = "ks";
  double C = 4;
  std::uint64_t a = 0, r = 0;          // 0: taken from the schedule
  std::uint32_t step = 0;              // schedule step supplying (a, r)
  bool exact = false;
  double k_frac = 0.5;
  double delta = 0.1;                  // dense-regime band, warning only
  std::optional<std::int64_t> lo, hi;  // window interval override
};

Json config_json(const ExperimentConfig& cfg);

/// Generated or loaded graph for a configuration.
Graph resolve_graph(const ExperimentConfig& cfg);
std::uint32_t resolve_k(const ExperimentConfig& cfg, std::size_t n);

/// Ordinary least squares of log y on log x.
struct LogLogFit {
  double slope = 0, slope_se = 0, intercept = 0;
  std::size_t points = 0;
};
/// Requires at least three distinct x and positive data.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Metrics available to sweeps: "ks", "mean_abs_dev", "llt".
double distribution_metric(const std::string& metric, const EdgeCountDistribution& dist, double window);

struct SweepPoint {
  std::uint64_t n = 0, k = 0, m = 0, seed = 0;
  double value = 0;
};
struct SweepResult {
  std::vector<SweepPoint> points;
  LogLogFit fit;
};

/// Repeats a sampling experiment over cfg.grid with cfg.seeds fresh seeds per
/// size: G(n, ⌊N/2⌋) (or G(n, p) when p is set), k = round(k_frac·n).
SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* progress);

/// Runs cfg.command; progress lines go to `progress` when non-null.
std::vector<Json> run_experiment(const ExperimentConfig& cfg, std::ostream* progress);

}  // namespace sublab
