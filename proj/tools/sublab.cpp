// sublab: command-line front end for the subset edge-count experiments.
//
// Exit codes: 0 success, 2 configuration error, 3 budget refusal,
// 4 numeric failure. SUBLAB_OUT_DIR and SUBLAB_WORKERS supply the output
// directory and worker count when --out / --workers are not given.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sublab/errors.hpp"
#include "sublab/experiments.hpp"

namespace {

struct Options {
  sublab::ExperimentConfig cfg;
  std::uint64_t m = 0;
  double p = 0;
  std::int64_t lo = 0, hi = 0;
};

void add_common(CLI::App* sub, Options& o) {
  auto& c = o.cfg;
  sub->add_option("--n", c.n, "number of vertices");
  sub->add_option("--k", c.k, "subset size (default round(k-frac * n))");
  sub->add_option("--k-frac", c.k_frac, "subset size as a fraction of n");
  sub->add_option("--M", o.m, "edge count for G(n, M)");
  sub->add_option("--p", o.p, "edge probability for G(n, p)")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--graph", c.graph, "read the graph from this file");
  sub->add_option("--seed", c.seed, "run seed");
  sub->add_option("--samples", c.samples, "Monte Carlo sample count");
  sub->add_flag("--exact", c.exact, "enumerate all subsets instead of sampling");
  sub->add_option("--budget", c.budget, "largest C(n, k) enumerated");
  sub->add_option("--workers", c.workers, "worker threads (0: all cores)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--window", c.window, "half-width of the z window in units of sigma");
  sub->add_option("--beta", c.beta, "smoothing exponent beta");
  sub->add_option("--eps", c.eps, "slack exponent epsilon");
  sub->add_option("--delta", c.delta, "dense-regime band: warn when M/N or k/n leaves [delta, 1-delta]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge counts of random vertex subsets: sampling, limit laws and Stein diagnostics"};
  app.require_subcommand(1);
  Options o;
  auto& c = o.cfg;

  const std::pair<const char*, const char*> commands[] = {
      {"gen", "generate G(n, M) or G(n, p) and write graph.txt"},
      {"stats", "degree statistics of a graph"},
      {"sample", "empirical distribution of e(S)"},
      {"exact", "exact distribution of e(S) by enumeration"},
      {"clt", "Kolmogorov and interval errors against the normal model"},
      {"llt", "pointwise local-limit error and smoothing defect"},
      {"stein", "drift identity, covariance checks and A/B diagnostics"},
      {"smooth", "smoothing schedule, binomial windows and defects"},
      {"sweep", "metric over an n grid with a log-log slope"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    const std::string cmd = name;
    if (cmd == "clt") {
      sub->add_option("--r", c.r, "interval length for the upper check");
      sub->add_option("--C", c.C, "constant in P(e in [z, z+r]) <= C r / n");
    }
    if (cmd == "stein") sub->add_option("--outer", c.outer, "subsets averaged in the A/B estimates");
    if (cmd == "smooth") {
      sub->add_option("--t", c.t, "extra-set size for the binomial window");
      sub->add_option("--mode", c.mode, "uniform-T | disjoint-family");
      sub->add_option("--a", c.a, "interval length (default from the schedule)");
      sub->add_option("--r", c.r, "difference range");
      sub->add_option("--step", c.step, "schedule step supplying (a, r)");
      sub->add_option("--lo", o.lo, "window interval lower end");
      sub->add_option("--hi", o.hi, "window interval upper end");
    }
    if (cmd == "sweep") {
      sub->add_option("--grid", c.grid, "vertex counts")->delimiter(',');
      sub->add_option("--seeds", c.seeds, "graphs per grid point");
      sub->add_option("--metric", c.metric, "ks | mean_abs_dev | llt");
    }
    sub->callback([&o, cmd, sub] {
      o.cfg.command = cmd;
      if (sub->get_option("--M")->count()) o.cfg.m = o.m;
      if (sub->get_option("--p")->count()) o.cfg.p = o.p;
      if (cmd == "smooth") {
        if (sub->get_option("--lo")->count()) o.cfg.lo = o.lo;
        if (sub->get_option("--hi")->count()) o.cfg.hi = o.hi;
      }
      if (!sub->get_option("--out")->count())
        if (const char* env = std::getenv("SUBLAB_OUT_DIR")) o.cfg.out = env;
      if (!sub->get_option("--workers")->count())
        if (const char* env = std::getenv("SUBLAB_WORKERS")) {
          try {
            o.cfg.workers = static_cast<unsigned>(std::stoul(env));
          } catch (const std::exception&) {
            throw CLI::ValidationError("SUBLAB_WORKERS", "must be a non-negative integer");
          }
        }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto records = sublab::run_experiment(c, &std::cerr);
    for (const auto& r : records) std::cout << r.dump() << '\n';
    return 0;
  } catch (const sublab::ConfigError& e) {
    std::cerr << "sublab: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const sublab::BudgetExceeded& e) {
    std::cerr << "sublab: budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const sublab::NumericError& e) {
    std::cerr << "sublab: numeric failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "sublab: internal error: " << e.what() << '\n';
    return 1;
  }
}
