#include "sublab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "sublab/errors.hpp"
#include "sublab/limit_models.hpp"
#include "sublab/revolving_door.hpp"
#include "sublab/rng.hpp"
#include "sublab/smoothing.hpp"
#include "sublab/stein.hpp"

namespace sublab {

namespace {

void note(std::ostream* progress, const std::string& text) {
  if (progress) *progress << "[sublab] " << text << std::endl;
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& file) {
  return std::filesystem::path(cfg.out) / file;
}

Json finish(Json record, const ExperimentConfig& cfg) {
  record["config"] = config_json(cfg);
  return record;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string shortest(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

bool has_graph_source(const ExperimentConfig& cfg) { return !cfg.graph.empty() || cfg.m || cfg.p; }

void warn_regime(const ExperimentConfig& cfg, const Graph& g, std::uint64_t k, std::ostream* progress) {
  for (const auto& w : regime_warnings(g.n(), g.edge_count(), k, cfg.delta)) note(progress, "warning: " + w);
}

EdgeCountDistribution make_distribution(const ExperimentConfig& cfg, const Graph& g, std::uint32_t k,
                                        std::ostream* progress) {
  warn_regime(cfg, g, k, progress);
  if (cfg.exact) {
    note(progress, "enumerating C(" + std::to_string(g.n()) + "," + std::to_string(k) + ") subsets");
    return exact_distribution(g, k, cfg.budget);
  }
  require(cfg.samples > 0, "--samples must be positive (or use --exact)");
  note(progress, "sampling " + std::to_string(cfg.samples) + " subsets of size " + std::to_string(k));
  return sample_edge_counts(g, k, cfg.samples, cfg.seed, cfg.workers);
}

// sup_z |P̂(e ≤ z) − 1{z ≥ μ}| for a model with zero variance.
double degenerate_ks(const EdgeCountDistribution& dist, double mu) {
  const double total = static_cast<double>(dist.total);
  std::uint64_t below = 0;
  double d = 0;
  for (const auto& [z, c] : dist.counts) {
    const double step = static_cast<double>(z) >= mu ? 1 : 0;
    d = std::max(d, std::abs(static_cast<double>(below) / total - (static_cast<double>(z) > mu ? 1 : 0)));
    below += c;
    d = std::max(d, std::abs(static_cast<double>(below) / total - step));
  }
  return d;
}

Json metric_record(const std::string& metric, double value, const EdgeCountDistribution& dist,
                   const ExperimentConfig& cfg) {
  Json r = make_record("metric");
  r["metric"] = metric;
  r["value"] = finite_or_null(value);
  r["n"] = dist.n;
  r["k"] = dist.k;
  r["M"] = dist.edges;
  r["samples"] = dist.total;
  r["window"] = cfg.window;
  r["seed"] = dist.seed;
  r["kind"] = std::string(name(dist.kind));
  return r;
}

Json graph_record(const Graph& g, const ExperimentConfig& cfg) {
  const GraphStats s = stats(g);
  Json r = make_record("graph");
  r["n"] = s.n;
  r["M"] = s.edges;
  r["density"] = s.density_value;
  r["mean_degree"] = s.mean_degree_value;
  r["scaled_variance"] = s.scaled_variance.str();
  r["paths"] = s.paths.str();
  r["regular"] = s.regular();
  r["third_moment"] = third_moment_stat(g);
  r["degree_identity"] = true;  // stats() throws otherwise
  r["source"] = cfg.graph.empty() ? (cfg.m ? "gnm" : "gnp") : cfg.graph;
  if (cfg.graph.empty()) r["seed"] = cfg.seed;
  return r;
}

Json distribution_record(const EdgeCountDistribution& dist, const std::string& path) {
  Json r = make_record("distribution");
  r["n"] = dist.n;
  r["k"] = dist.k;
  r["M"] = dist.edges;
  r["kind"] = std::string(name(dist.kind));
  r["total"] = dist.total;
  r["seed"] = dist.seed;
  r["mean"] = to_double(dist.mean());
  r["min"] = dist.counts.begin()->first;
  r["max"] = dist.counts.rbegin()->first;
  r["path"] = path;
  return r;
}

std::vector<Json> cmd_gen(const ExperimentConfig& cfg) {
  require(cfg.graph.empty(), "gen generates a graph; do not pass --graph");
  const Graph g = resolve_graph(cfg);
  save_graph(out_path(cfg, "graph.txt"), g);
  return {finish(graph_record(g, cfg), cfg)};
}

std::vector<Json> cmd_stats(const ExperimentConfig& cfg) { return {finish(graph_record(resolve_graph(cfg), cfg), cfg)}; }

std::vector<Json> cmd_distribution(const ExperimentConfig& cfg, std::ostream* progress) {
  ExperimentConfig c = cfg;
  c.exact = cfg.command == "exact";
  const Graph g = resolve_graph(c);
  const auto dist = make_distribution(c, g, resolve_k(c, g.n()), progress);
  const std::string file = c.command + ".csv";
  save_distribution(out_path(c, file), dist);
  return {finish(distribution_record(dist, file), c)};
}

std::vector<Json> cmd_clt(const ExperimentConfig& cfg, std::ostream* progress) {
  const Graph g = resolve_graph(cfg);
  const std::uint32_t k = resolve_k(cfg, g.n());
  const auto dist = make_distribution(cfg, g, k, progress);
  save_distribution(out_path(cfg, "clt.csv"), dist);
  const auto model = normal_model(g.n(), k, g.edge_count());
  std::vector<Json> out;
  if (!(model.sigma2 > 0)) {
    // Zero variance: compare with the point mass the Gaussian degenerates to.
    Json r = metric_record("ks", degenerate_ks(dist, model.mu), dist, cfg);
    r["kind"] = "degenerate";
    r["mu"] = model.mu;
    r["sigma"] = 0.0;
    out.push_back(finish(r, cfg));
    return out;
  }
  Json ks = metric_record("ks", kolmogorov_distance(dist, model), dist, cfg);
  ks["scale"] = std::pow(static_cast<double>(g.n()), -0.25);
  ks["mu"] = model.mu;
  ks["sigma"] = model.sigma;
  out.push_back(finish(ks, cfg));

  // Intervals with endpoints on the half-σ grid inside ±window·σ.
  double worst = 0, w0 = 0, w1 = 0;
  const int steps = static_cast<int>(std::floor(2 * cfg.window));
  for (int i = -steps; i <= steps; ++i)
    for (int j = i; j <= steps; ++j) {
      const double z0 = model.mu + 0.5 * i * model.sigma, z1 = model.mu + 0.5 * j * model.sigma;
      const double e = interval_error(dist, model, z0, z1);
      if (e > worst) {
        worst = e;
        w0 = z0;
        w1 = z1;
      }
    }
  Json iv = metric_record("interval_error_max", worst, dist, cfg);
  iv["z0"] = w0;
  iv["z1"] = w1;
  out.push_back(finish(iv, cfg));

  if (cfg.r > 0) {
    const auto check = interval_upper_check(dist, cfg.r, cfg.C);
    Json up = metric_record("interval_upper_ratio", check.ratio, dist, cfg);
    up["r"] = cfg.r;
    up["C"] = cfg.C;
    up["worst_z"] = check.worst_z;
    out.push_back(finish(up, cfg));
  }
  return out;
}

std::vector<Json> cmd_llt(const ExperimentConfig& cfg, std::ostream* progress) {
  const Graph g = resolve_graph(cfg);
  const std::uint32_t k = resolve_k(cfg, g.n());
  const auto dist = make_distribution(cfg, g, k, progress);
  const auto model = normal_model(g.n(), k, g.edge_count());
  const auto llt = llt_error(dist, model, cfg.window);
  const double n = static_cast<double>(g.n());

  std::ostringstream csv;
  csv << "z,pmf,phi\n";
  const auto zw = z_window(model, cfg.window);
  for (std::int64_t z = zw.lo; z <= zw.hi; ++z)
    csv << z << ',' << shortest(dist.pmf(z)) << ',' << shortest(normal_pdf(model, static_cast<double>(z))) << '\n';
  write_text_file(out_path(cfg, "llt.csv"), csv.str());

  std::vector<Json> out;
  Json r = metric_record("llt", llt.value, dist, cfg);
  r["scale"] = std::pow(n, -cfg.beta + cfg.eps);
  r["argmax"] = llt.argmax;
  r["points"] = llt.points;
  r["point_se"] = llt.point_se;
  r["noisy"] = llt.noisy;
  r["mu"] = model.mu;
  r["sigma"] = model.sigma;
  out.push_back(finish(r, cfg));

  try {
    const auto s = schedule(g.n(), cfg.beta, cfg.eps);
    const auto sd = smoothing_defect(dist, s.a, zw);
    Json d = make_record("defect");
    d["metric"] = "smoothing";
    d["value"] = sd.value;
    d["n"] = dist.n;
    d["k"] = dist.k;
    d["M"] = dist.edges;
    d["samples"] = dist.total;
    d["a"] = s.a;
    d["window"] = cfg.window;
    d["seed"] = dist.seed;
    d["kind"] = std::string(name(dist.kind));
    d["z1"] = sd.z1;
    d["scale"] = std::pow(n, -1 - cfg.beta + 2 * cfg.eps);
    out.push_back(finish(d, cfg));
  } catch (const NumericError& e) {
    note(progress, std::string("no smoothing schedule at this n: ") + e.what());
  }
  return out;
}

std::vector<Json> cmd_stein(const ExperimentConfig& cfg, std::ostream* progress) {
  const Graph g = resolve_graph(cfg);
  const std::uint32_t k = resolve_k(cfg, g.n());
  warn_regime(cfg, g, k, progress);
  const GraphStats st = stats(g);
  const SteinMatrices sm = stein_matrices(st, k);

  // Drift identity on a handful of uniform subsets; any nonzero error is a bug.
  constexpr int kDriftSubsets = 20;
  Philox rng(derive_seed(cfg.seed, StreamTag::stein, 0), stream_id(StreamTag::stein, 0));
  SubsetSampler sampler(g.n(), k);
  Rational drift = 0;
  for (int i = 0; i < kDriftSubsets; ++i) drift = std::max(drift, drift_check(g, sampler.draw(rng)));
  if (drift != 0) throw NumericError("drift identity failed: error " + std::to_string(to_double(drift)));
  note(progress, "drift identity exact on " + std::to_string(kDriftSubsets) + " subsets");

  Json r = make_record("stein");
  r["n"] = g.n();
  r["k"] = k;
  r["M"] = g.edge_count();
  r["lambda"] = sm.lambda;
  r["Sigma11"] = sm.Sigma11;
  r["A_hat"] = nullptr;
  r["A_se"] = nullptr;
  r["B_hat"] = nullptr;
  r["B_se"] = nullptr;
  r["T_hat"] = nullptr;
  r["seed"] = cfg.seed;
  r["drift_max"] = 0.0;
  r["drift_subsets"] = kDriftSubsets;
  r["singular"] = sm.singular();

  const auto count = binomial_count(g.n(), k);
  if (count && *count <= cfg.budget) {
    note(progress, "enumerating " + std::to_string(*count) + " subsets for the covariance check");
    const auto em = sigma_by_enumeration(g, k, cfg.budget);
    double err = max_abs(to_double(em.second - sm.Sigma_q));
    err = std::max({err, std::abs(to_double(em.mean_w)), std::abs(to_double(em.mean_wbar))});
    r["sigma_enumeration_error"] = err;
  }
  try {
    r["sigma11_rel"] = sigma11_vs_lambda(st, k);
  } catch (const NumericError&) {
    r["sigma11_rel"] = nullptr;
  }
  if (!sm.singular()) {
    note(progress, "estimating A and B over " + std::to_string(cfg.outer) + " subsets");
    const auto d = estimate_AB(g, k, cfg.outer, cfg.seed, cfg.workers);
    r["A_hat"] = d.A_hat;
    r["A_se"] = d.A_se;
    r["B_hat"] = d.B_hat;
    r["B_se"] = d.B_se;
    r["T_hat"] = d.T_hat;
    r["outer"] = d.outer;
    r["lambda_1"] = d.lambda_i[0];
    r["lambda_2"] = d.lambda_i[1];
    r["conditioning"] = d.conditioning;
  } else {
    note(progress, "covariance matrix is singular (regular graph); A and B are not defined");
  }
  return {finish(r, cfg)};
}

WindowMode parse_mode(const std::string& mode) {
  if (mode == "uniform-T") return WindowMode::uniform_t;
  if (mode == "disjoint-family") return WindowMode::disjoint_family;
  throw ConfigError("unknown window mode '" + mode + "' (uniform-T | disjoint-family)");
}

std::vector<Json> cmd_smooth(const ExperimentConfig& cfg, std::ostream* progress) {
  const bool with_graph = has_graph_source(cfg);
  Graph g;
  std::uint64_t n = cfg.n;
  if (with_graph) {
    g = resolve_graph(cfg);
    n = g.n();
  }
  const auto s = schedule(n, cfg.beta, cfg.eps);
  std::ostringstream csv;
  write_schedule_csv(csv, s);
  write_text_file(out_path(cfg, "schedule.csv"), csv.str());

  std::vector<Json> out;
  Json sr = make_record("schedule");
  sr["n"] = n;
  sr["beta"] = cfg.beta;
  sr["eps"] = cfg.eps;
  sr["j0"] = s.j0;
  sr["a"] = s.a;
  sr["t_sum"] = s.t_sum;
  sr["all_valid"] = s.all_valid;
  sr["monotone"] = s.monotone;
  sr["in_target"] = s.in_target();
  sr["target_lo"] = s.target_lo;
  sr["target_hi"] = s.target_hi;
  out.push_back(finish(sr, cfg));
  if (!with_graph) return out;

  const std::uint32_t k = resolve_k(cfg, n);
  warn_regime(cfg, g, k, progress);
  if (cfg.t > 0) {
    const double p = cfg.p ? *cfg.p : static_cast<double>(g.edge_count()) / static_cast<double>(pairs_of(n));
    const auto y = binomial_model(k, cfg.t, p);
    const std::uint64_t a = cfg.a ? cfg.a : s.a;
    const std::int64_t lo = cfg.lo ? *cfg.lo : static_cast<std::int64_t>(std::ceil(y.mean() - a / 2.0));
    const std::int64_t hi = cfg.hi ? *cfg.hi : lo + static_cast<std::int64_t>(a) - 1;
    const std::uint64_t samples = cfg.samples ? cfg.samples : 100000;
    note(progress, "window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] in " + cfg.mode + " mode");
    const auto w = window_vs_binomial(g, k, cfg.t, lo, hi, parse_mode(cfg.mode), samples, cfg.seed, p);
    Json r = make_record("window");
    r["n"] = n;
    r["k"] = k;
    r["M"] = g.edge_count();
    r["t"] = cfg.t;
    r["lo"] = lo;
    r["hi"] = hi;
    r["mode"] = name(w.mode);
    r["trials"] = w.trials;
    r["seed"] = cfg.seed;
    r["p"] = p;
    r["proportion"] = w.proportion;
    r["binomial"] = w.binomial;
    r["deviation"] = w.deviation;
    r["se"] = w.se;
    r["a"] = a;
    out.push_back(finish(r, cfg));
    return out;
  }
  if (!cfg.exact && cfg.samples == 0) return out;

  std::uint64_t a = cfg.a, r = cfg.r;
  if (a == 0) {
    if (cfg.step >= s.steps.size()) throw ConfigError("schedule has no step " + std::to_string(cfg.step));
    a = s.steps[cfg.step].triple.a;
    r = s.steps[cfg.step].triple.r;
  }
  if (r == 0) r = a;
  const auto dist = make_distribution(cfg, g, k, progress);
  const auto model = normal_model(n, k, g.edge_count());
  const auto zw = z_window(model, cfg.window);
  const double scale = std::pow(static_cast<double>(n), -1 - cfg.beta + 2 * cfg.eps);
  auto defect = [&](const std::string& metric, const DefectResult& d) {
    Json rec = make_record("defect");
    rec["metric"] = metric;
    rec["value"] = d.value;
    rec["n"] = n;
    rec["k"] = k;
    rec["M"] = g.edge_count();
    rec["samples"] = dist.total;
    rec["a"] = a;
    rec["window"] = cfg.window;
    rec["seed"] = dist.seed;
    rec["kind"] = std::string(name(dist.kind));
    rec["z1"] = d.z1;
    rec["scale"] = scale;
    if (cfg.a == 0) rec["step"] = cfg.step;
    return rec;
  };
  out.push_back(finish(defect("smoothing", smoothing_defect(dist, a, zw)), cfg));
  const auto dd = difference_defect(dist, a, r, zw);
  Json rec = defect("difference", dd);
  rec["r"] = r;
  rec["z2"] = dd.z2;
  rec["implied_bound"] = dd.implied_bound;
  const auto win = window_counts(dist, a, dd.z1, dd.z1);
  const double total = static_cast<double>(dist.total);
  rec["noise"] = dist.kind == DistributionKind::exact ? 0.0 : 2 * std::sqrt(static_cast<double>(win[0]) / total) / std::sqrt(total);
  out.push_back(finish(rec, cfg));
  return out;
}

std::vector<Json> cmd_sweep(const ExperimentConfig& cfg, std::ostream* progress) {
  const auto result = run_sweep(cfg, progress);
  std::ostringstream csv;
  csv << "n,seed,value\n";
  std::vector<Json> out;
  for (const auto& pt : result.points) {
    csv << pt.n << ',' << pt.seed << ',' << shortest(pt.value) << '\n';
    Json r = make_record("metric");
    r["metric"] = cfg.metric;
    r["value"] = pt.value;
    r["n"] = pt.n;
    r["k"] = pt.k;
    r["M"] = pt.m;
    r["samples"] = cfg.samples;
    r["window"] = cfg.window;
    r["seed"] = pt.seed;
    out.push_back(finish(r, cfg));
  }
  write_text_file(out_path(cfg, "sweep.csv"), csv.str());
  Json r = make_record("sweep");
  r["metric"] = cfg.metric;
  r["slope"] = result.fit.slope;
  r["slope_se"] = result.fit.slope_se;
  r["intercept"] = result.fit.intercept;
  r["points"] = result.fit.points;
  r["seed"] = cfg.seed;
  r["grid_size"] = cfg.grid.size();
  r["seeds"] = cfg.seeds;
  out.push_back(finish(r, cfg));
  return out;
}

}  // namespace

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["M"] = cfg.m ? Json(*cfg.m) : Json(nullptr);
  j["p"] = cfg.p ? Json(*cfg.p) : Json(nullptr);
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["workers"] = cfg.workers;
  j["beta"] = cfg.beta;
  j["eps"] = cfg.eps;
  j["window"] = cfg.window;
  j["graph"] = cfg.graph;
  j["out"] = cfg.out;
  j["budget"] = cfg.budget;
  j["t"] = cfg.t;
  j["mode"] = cfg.mode;
  j["outer"] = cfg.outer;
  j["grid"] = cfg.grid;
  j["seeds"] = cfg.seeds;
  j["metric"] = cfg.metric;
  j["C"] = cfg.C;
  j["a"] = cfg.a;
  j["r"] = cfg.r;
  j["step"] = cfg.step;
  j["exact"] = cfg.exact;
  j["k_frac"] = cfg.k_frac;
  j["delta"] = cfg.delta;
  j["lo"] = cfg.lo ? Json(*cfg.lo) : Json(nullptr);
  j["hi"] = cfg.hi ? Json(*cfg.hi) : Json(nullptr);
  return j;
}

Graph resolve_graph(const ExperimentConfig& cfg) {
  if (!cfg.graph.empty()) {
    if (cfg.m) throw ConfigError("--graph and --M are mutually exclusive");
    return load_graph(cfg.graph);
  }
  if (cfg.m && cfg.p) throw ConfigError("give either --M or --p, not both");
  if (!cfg.m && !cfg.p) throw ConfigError("no graph source: pass --graph, or --n with --M or --p");
  if (cfg.n < 2) throw ConfigError("--n must be at least 2");
  if (cfg.n > (1u << 20)) throw ConfigError("--n is too large");
  if (cfg.m) return gen_gnm(cfg.n, *cfg.m, cfg.seed);
  return gen_gnp(cfg.n, *cfg.p, cfg.seed);
}

std::uint32_t resolve_k(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.k != 0) {
    if (cfg.k > n) throw ConfigError("--k exceeds n");
    return static_cast<std::uint32_t>(cfg.k);
  }
  if (!(cfg.k_frac > 0 && cfg.k_frac < 1)) throw ConfigError("--k-frac must lie in (0, 1)");
  return static_cast<std::uint32_t>(std::llround(cfg.k_frac * static_cast<double>(n)));
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit needs paired data");
  const std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 3) throw ConfigError("slope fitting needs at least 3 distinct grid points");
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0)) throw ConfigError("grid values must be positive");
    if (!(y[i] > 0)) throw NumericError("log-log fit needs positive metric values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  LogLogFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ly[i] - fit.intercept - fit.slope * lx[i];
    ssr += e * e;
  }
  fit.slope_se = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return fit;
}

double distribution_metric(const std::string& metric, const EdgeCountDistribution& dist, double window) {
  const auto model = normal_model(dist.n, dist.k, dist.edges);
  if (metric == "ks") return kolmogorov_distance(dist, model);
  if (metric == "llt") return llt_error(dist, model, window).value;
  if (metric == "mean_abs_dev") {
    double s = 0;
    for (const auto& [z, c] : dist.counts) s += std::abs(static_cast<double>(z) - model.mu) * static_cast<double>(c);
    return s / static_cast<double>(dist.total);
  }
  throw ConfigError("unknown metric '" + metric + "' (ks | mean_abs_dev | llt)");
}

SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* progress) {
  if (std::set<std::uint64_t>(cfg.grid.begin(), cfg.grid.end()).size() < 3)
    throw ConfigError("sweep needs a grid of at least 3 distinct sizes");
  require(cfg.samples > 0, "--samples must be positive");
  require(cfg.seeds >= 1, "--seeds must be at least 1");
  if (cfg.metric != "ks" && cfg.metric != "llt" && cfg.metric != "mean_abs_dev")
    throw ConfigError("unknown metric '" + cfg.metric + "' (ks | mean_abs_dev | llt)");
  SweepResult out;
  std::uint64_t index = 0;
  for (const std::uint64_t n : cfg.grid) {
    if (n < 4 || n > (1u << 20)) throw ConfigError("grid sizes must lie in [4, 2^20]");
    for (std::uint64_t s = 0; s < cfg.seeds; ++s, ++index) {
      const std::uint64_t seed = derive_seed(cfg.seed, StreamTag::sweep, index);
      const Graph g = cfg.p ? gen_gnp(n, *cfg.p, seed) : gen_gnm(n, pairs_of(n) / 2, seed);
      ExperimentConfig point = cfg;
      point.k = 0;
      const std::uint32_t k = resolve_k(point, n);
      note(progress, "sweep n=" + std::to_string(n) + " seed " + std::to_string(s + 1) + "/" + std::to_string(cfg.seeds));
      const auto dist = sample_edge_counts(g, k, cfg.samples, seed, cfg.workers);
      out.points.push_back({n, k, g.edge_count(), seed, distribution_metric(cfg.metric, dist, cfg.window)});
    }
  }
  std::vector<double> x, y;
  for (const auto& pt : out.points) {
    x.push_back(static_cast<double>(pt.n));
    y.push_back(pt.value);
  }
  out.fit = fit_loglog(x, y);
  return out;
}

std::vector<Json> run_experiment(const ExperimentConfig& cfg, std::ostream* progress) {
  std::vector<Json> records;
  const std::string& c = cfg.command;
  if (c == "gen")
    records = cmd_gen(cfg);
  else if (c == "stats")
    records = cmd_stats(cfg);
  else if (c == "sample" || c == "exact")
    records = cmd_distribution(cfg, progress);
  else if (c == "clt")
    records = cmd_clt(cfg, progress);
  else if (c == "llt")
    records = cmd_llt(cfg, progress);
  else if (c == "stein")
    records = cmd_stein(cfg, progress);
  else if (c == "smooth")
    records = cmd_smooth(cfg, progress);
  else if (c == "sweep")
    records = cmd_sweep(cfg, progress);
  else
    throw ConfigError("unknown command '" + c + "'");
  std::ostringstream out;
  write_records(out, records);
  write_text_file(out_path(cfg, c + ".jsonl"), out.str());
  return records;
}

}  // namespace sublab
