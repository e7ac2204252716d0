#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpstab/adversarial.hpp"
#include "lpstab/checks.hpp"
#include "lpstab/rng.hpp"
#include "lpstab/stability_lab.hpp"
#include "lpstab/usolp.hpp"

namespace {

using lpstab::Vector;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

// Config-file values fill in options the command line left untouched.
template <typename T>
void merge(const json& j, const char* key, const CLI::Option* opt, T& var) {
  if (opt != nullptr && opt->count() == 0 && j.contains(key)) {
    var = j.at(key).get<T>();
  }
}

void parallel_for(int jobs, int count, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  return out;
}

lpstab::Dataset synthetic_glm(std::uint64_t seed, int n, int d, double p,
                              double data_radius) {
  auto rng = lpstab::make_rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const double ps = lpstab::dual_exponent(p);
  Vector truth(d);
  for (int i = 0; i < d; ++i) truth[i] = unif(rng);
  std::vector<lpstab::Sample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lpstab::Sample z;
    z.features = Vector(d);
    for (int k = 0; k < d; ++k) z.features[k] = unif(rng);
    const double norm = lpstab::pnorm(z.features, ps);
    if (norm > 0.0) z.features *= data_radius * 0.9 / norm;
    // labels correlated with a fixed direction so the risk landscape is
    // nontrivial; 20% label noise
    const double margin = truth.dot(z.features);
    z.label = margin >= 0.0 ? 1.0 : -1.0;
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.2) {
      z.label = -z.label;
    }
    samples.push_back(std::move(z));
  }
  return lpstab::Dataset::make(std::move(samples));
}

struct SweepCell {
  int n = 0;
  double mean_stability = 0.0;
  double stability_stderr = 0.0;
  double theory_bound = 0.0;
  double mean_excess = 0.0;
  double risk_stderr = 0.0;
  bool certified = true;
};

int cmd_verify(const std::string& suite, std::uint64_t seed,
               const std::string& out_path) {
  std::vector<lpstab::CheckResult> results;
  try {
    results = lpstab::verify_suite(suite, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::ostringstream report;
  for (const auto& r : results) {
    report << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (" << r.detail
           << ")\n";
  }
  std::cout << report.str();
  if (!out_path.empty()) open_out(out_path) << report.str();
  return lpstab::all_passed(results) ? kExitOk : kExitAssertion;
}

int cmd_usolp_run(double p, int d, int n, long T, double R,
                  const std::string& mode, const std::string& solver,
                  const std::string& data_path, std::uint64_t seed,
                  const std::string& out_path,
                  const std::string& manifest_path) {
  lpstab::Dataset data = data_path.empty()
                             ? synthetic_glm(seed, n, d, p, 1.0)
                             : lpstab::read_dataset_csv_file(data_path);
  const lpstab::LossModel loss = lpstab::LossModel::logistic();

  lpstab::UsolpConfig cfg;
  cfg.geometry = lpstab::PNormGeometry::for_dimension(p, data.dim);
  cfg.R = R;
  cfg.T = T;
  cfg.solver = solver == "pgd" ? lpstab::SolverSpec::pgd()
                               : lpstab::SolverSpec::apgd();
  cfg.L = lpstab::glm_smoothness_bound(data, loss.link_smoothness(),
                                       cfg.geometry.effective_p, 1.0);
  cfg.x0 = Vector::Zero(data.dim);
  cfg.n = data.size();
  if (mode == "stat") {
    cfg.mode = lpstab::UsolpMode::StatOptimal;
  } else if (mode != "alg1") {
    std::cerr << "error: mode must be alg1 or stat\n";
    return kExitConfig;
  }

  const auto result = lpstab::run_usolp(cfg, data, loss);
  {
    std::ostringstream csv;
    lpstab::write_trace_csv(csv, result.trace);
    std::cout << csv.str();
    if (!out_path.empty()) open_out(out_path) << csv.str();
  }
  {
    std::ostringstream man;
    lpstab::write_run_manifest(man, cfg, result.schedule, data.dim,
                               data.size(), seed);
    if (!manifest_path.empty()) {
      open_out(manifest_path) << man.str();
    } else {
      std::cerr << man.str();
    }
  }
  if (!result.trace.fully_certified) {
    std::cerr << "warning: at least one stage failed to certify its target\n";
  }
  return kExitOk;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells,
                     double p, long T, std::uint64_t seed,
                     const std::string& slope_label) {
  out << "n,p,T,mean_stability,stderr,theory_bound,mean_excess_risk,"
         "risk_stderr,seed\n";
  std::vector<double> ns, stabs, risks;
  for (const auto& c : cells) {
    out << c.n << "," << p << "," << T << "," << c.mean_stability << ","
        << c.stability_stderr << "," << c.theory_bound << "," << c.mean_excess
        << "," << c.risk_stderr << "," << seed;
    if (!c.certified) out << ",# non-certified cell";
    out << "\n";
    ns.push_back(static_cast<double>(c.n));
    stabs.push_back(c.mean_stability);
    risks.push_back(c.mean_excess);
  }
  try {
    const auto fit = lpstab::fit_rate(
        ns, slope_label == "stability" ? stabs : risks);
    out << "# fitted_slope_" << slope_label << "=" << fit.slope << "\n";
  } catch (const std::exception& e) {
    out << "# fitted_slope_" << slope_label << "=unavailable (" << e.what()
        << ")\n";
  }
}

int cmd_stability_sweep(double p, int d, std::vector<int> n_grid, long T,
                        int replicates, double R, double G, double delta,
                        std::uint64_t seed, int jobs,
                        const std::string& out_path) {
  if (n_grid.size() < 4) {
    std::cerr << "error: the n grid needs at least 4 points\n";
    return kExitConfig;
  }
  std::sort(n_grid.begin(), n_grid.end());

  // high-dimensional single-spike family: in the d >> n regime the
  // regularizer supplies all the curvature, which is exactly the setting the
  // stability exponent describes
  const auto geom = lpstab::PNormGeometry::for_dimension(p, d);
  const int s = d;
  auto vrng = lpstab::make_rng(lpstab::mix_seed(seed, 5001));
  std::uniform_int_distribution<int> coin(0, 1);
  Vector v(d);
  for (int j = 0; j < d; ++j) v[j] = coin(vrng) == 0 ? -1.0 : 1.0;
  const auto family = lpstab::Case2Family::make(v, delta, s, d, G, p);
  const lpstab::LossModel loss = family.loss();

  // fixed-T policy: the schedule's alpha depends on (p, T, R, L) only
  lpstab::UsolpConfig policy;
  policy.geometry = geom;
  policy.R = R;
  policy.T = T;
  policy.solver = lpstab::SolverSpec::pgd();
  policy.L = G / (2.0 * R);
  policy.x0 = Vector::Zero(d);
  const auto sched = lpstab::compute_schedule(policy);

  // certified minimizer of the alpha-regularized empirical risk; tight
  // accuracy so optimization error does not mask the stability signal
  const lpstab::LearningRule rule = [&](const lpstab::Dataset& S,
                                        std::uint64_t) {
    lpstab::BallDomain ball{Vector::Zero(d), R, geom};
    auto reg = lpstab::Regularizer::make(geom, Vector::Zero(d), sched.alpha);
    lpstab::RegularizedErm erm(S, loss, ball, reg, policy.L);
    lpstab::SolveRequest req;
    req.objective = &erm;
    req.start = ball.center;
    req.ball = ball;
    req.target_gap = 1e-7;
    req.budget = 200000;
    return lpstab::solve(lpstab::SolverSpec::apgd(), req).point;
  };

  std::vector<SweepCell> cells(n_grid.size());
  parallel_for(jobs, static_cast<int>(n_grid.size()), [&](int ci) {
    const int n = n_grid[static_cast<std::size_t>(ci)];
    SweepCell cell;
    cell.n = n;
    bool certified = true;

    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(replicates));
    const double theory =
        lpstab::stability_bound_theory(geom.p_hat2, n, sched.alpha, G);
    for (int m = 0; m < replicates; ++m) {
      const std::uint64_t cell_seed =
          lpstab::mix_seed(seed, static_cast<std::uint64_t>(ci * 10000 + m));
      lpstab::Dataset S = lpstab::sample_case2(family, n, cell_seed);
      lpstab::Dataset fresh = lpstab::sample_case2(
          family, 257, lpstab::mix_seed(cell_seed, 1));
      auto pair = lpstab::make_neighbor(
          S, static_cast<int>(cell_seed % static_cast<std::uint64_t>(n)),
          fresh.samples.back());
      std::vector<lpstab::Sample> candidates = S.samples;
      candidates.push_back(pair.replacement);
      candidates.insert(candidates.end(), fresh.samples.begin(),
                        fresh.samples.end() - 1);
      const auto rep = lpstab::stability_estimate(rule, loss, pair, candidates,
                                                  cell_seed, theory);
      gaps.push_back(rep.sup_gap);
    }
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    var /= static_cast<double>(gaps.size() - 1);
    cell.mean_stability = mean;
    cell.stability_stderr = std::sqrt(var / static_cast<double>(gaps.size()));
    cell.theory_bound = theory;
    cell.certified = certified;
    cells[static_cast<std::size_t>(ci)] = cell;
  });

  std::ostringstream csv;
  write_sweep_csv(csv, cells, p, T, seed, "stability");
  std::cout << csv.str();
  if (!out_path.empty()) open_out(out_path) << csv.str();
  return kExitOk;
}

int cmd_risk_sweep(double p, int d, std::vector<int> n_grid, int replicates,
                   double R, double G, std::uint64_t seed, int jobs,
                   const std::string& out_path) {
  if (n_grid.size() < 4) {
    std::cerr << "error: the n grid needs at least 4 points\n";
    return kExitConfig;
  }
  std::sort(n_grid.begin(), n_grid.end());

  std::vector<SweepCell> cells(n_grid.size());
  parallel_for(jobs, static_cast<int>(n_grid.size()), [&](int ci) {
    const int n = n_grid[static_cast<std::size_t>(ci)];
    SweepCell cell;
    cell.n = n;
    bool certified = true;

    const auto geom = lpstab::PNormGeometry::for_dimension(p, d);
    const int s = std::min(d, std::max(4, 48 * n > d ? d / 2 : 48 * n));
    auto rng = lpstab::make_rng(lpstab::mix_seed(seed, 7000 + ci));
    std::uniform_int_distribution<int> coin(0, 1);
    Vector v = Vector::Zero(d);
    for (int j = 0; j < s; ++j) v[j] = coin(rng) == 0 ? -1.0 : 1.0;
    const double delta =
        lpstab::delta_schedule(lpstab::LowerBoundCase::Case2, s, n, d);
    const auto family = lpstab::Case2Family::make(v, delta, s, d, G, p);

    lpstab::SyntheticDistribution dist;
    dist.sample_dataset = [family](int count, std::uint64_t sd) {
      return lpstab::sample_case2(family, count, sd);
    };
    dist.population_risk = [family](const Vector& x) {
      return family.population_risk(x);
    };
    dist.population_min = lpstab::population_min_linear(family, R);

    // linear loss: the Lipschitz constant is G directly; feed the matching
    // surrogate smoothness so the schedule's G = 2LR equals it
    const lpstab::LearningRule rule = [&, family](const lpstab::Dataset& S,
                                                  std::uint64_t) {
      lpstab::UsolpConfig cfg;
      cfg.geometry = geom;
      cfg.R = R;
      cfg.T = 1000;
      cfg.solver = lpstab::SolverSpec::apgd();
      cfg.L = G / (2.0 * R);
      cfg.x0 = Vector::Zero(d);
      cfg.n = S.size();
      cfg.mode = lpstab::UsolpMode::StatOptimal;
      const auto result = lpstab::run_usolp(cfg, S, family.loss());
      if (!result.trace.fully_certified) certified = false;
      return result.point;
    };

    const auto est = lpstab::excess_risk_estimate(
        rule, dist, n, replicates, lpstab::mix_seed(seed, 9000 + ci));
    cell.mean_excess = est.mean;
    cell.risk_stderr = est.stderr_;
    const double D = std::pow(lpstab::cbar(geom.effective_p) /
                                  geom.effective_p,
                              1.0 / geom.effective_p) *
                     R;
    cell.theory_bound =
        8.0 * G * D * std::pow(static_cast<double>(n), -1.0 / geom.p_hat2);
    cell.certified = certified;
    cells[static_cast<std::size_t>(ci)] = cell;
  });

  std::ostringstream csv;
  write_sweep_csv(csv, cells, p, 0, seed, "risk");
  std::cout << csv.str();
  if (!out_path.empty()) open_out(out_path) << csv.str();
  return kExitOk;
}

int cmd_lowerbound_audit(double p, int d, int n, int s, double G, double R,
                         int replicates, std::uint64_t seed, int jobs,
                         const std::string& out_path) {
  if (48 * n >= d) {
    std::cerr << "error: the audited regime needs 48n < d; try d >= "
              << 48 * n + 1 << " or n <= " << (d - 1) / 48 << "\n";
    return kExitConfig;
  }
  if (s <= 0) {
    // largest power of two within the admissible support; a power-of-two
    // support gets the Hadamard-based packing for the Bayes prior
    s = 4;
    while (2 * s <= std::min(d, 48 * n)) s *= 2;
  }
  const double delta =
      lpstab::delta_schedule(lpstab::LowerBoundCase::Case2, s, n, d);
  const auto bound = lpstab::lower_bound_value(p, d, n, G, R);

  // cross-check the closed-form optimality-gap distance on random pairs
  auto rng = lpstab::make_rng(lpstab::mix_seed(seed, 31));
  std::uniform_int_distribution<int> coin(0, 1);
  double dopt_worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    const int ss = 2 + it % 5;
    const int dd = ss + 2;
    Vector v = Vector::Zero(dd), vp = Vector::Zero(dd);
    for (int j = 0; j < ss; ++j) {
      v[j] = coin(rng) == 0 ? -1.0 : 1.0;
      vp[j] = coin(rng) == 0 ? -1.0 : 1.0;
    }
    auto fam = lpstab::Case2Family::make(v, 0.5, ss, dd, G, p);
    auto famp = lpstab::Case2Family::make(vp, 0.5, ss, dd, G, p);
    lpstab::BallDomain ball{Vector::Zero(dd), R, lpstab::PNormGeometry::make(p)};
    const Vector g = G * 0.5 / ss * (v + vp);
    const Vector u = lpstab::linear_max_over_ball(-g, ball);
    const double numeric = fam.population_risk(u) + famp.population_risk(u) -
                           lpstab::population_min_linear(fam, R) -
                           lpstab::population_min_linear(famp, R);
    dopt_worst = std::max(
        dopt_worst, std::abs(lpstab::d_opt_case2(fam, v, vp, R) - numeric));
  }

  const auto pack = lpstab::gv_packing(s, lpstab::mix_seed(seed, 32), 64);

  struct EstimatorRow {
    std::string name;
    double mc_risk = 0.0;
    double stderr_ = 0.0;
  };
  std::vector<EstimatorRow> rows(2);
  rows[0].name = "ball-erm";
  rows[1].name = "usolp-stat";

  const int cells_total = static_cast<int>(pack.vectors.size());
  std::vector<std::vector<double>> risks(2);
  std::vector<std::mutex> locks(2);
  parallel_for(jobs, cells_total, [&](int vi) {
    Vector v = Vector::Zero(d);
    v.head(s) = pack.vectors[static_cast<std::size_t>(vi)];
    const auto family = lpstab::Case2Family::make(v, delta, s, d, G, p);
    const double pop_min = lpstab::population_min_linear(family, R);
    lpstab::BallDomain ball{Vector::Zero(d), R, lpstab::PNormGeometry::make(p)};
    for (int m = 0; m < replicates; ++m) {
      const std::uint64_t cell_seed =
          lpstab::mix_seed(seed, static_cast<std::uint64_t>(vi * 1000 + m));
      const lpstab::Dataset S = lpstab::sample_case2(family, n, cell_seed);
      // exact ball-constrained ERM of the linear empirical loss
      const Vector mean_grad =
          lpstab::empirical_risk(S, family.loss(), Vector::Zero(d)).second;
      const Vector erm = lpstab::linear_max_over_ball(-mean_grad, ball);
      {
        std::lock_guard<std::mutex> lock(locks[0]);
        risks[0].push_back(family.population_risk(erm) - pop_min);
      }
      lpstab::UsolpConfig cfg;
      cfg.geometry = lpstab::PNormGeometry::for_dimension(p, d);
      cfg.R = R;
      cfg.T = 1000;
      cfg.solver = lpstab::SolverSpec::apgd();
      cfg.L = G / (2.0 * R);
      cfg.x0 = Vector::Zero(d);
      cfg.n = n;
      cfg.mode = lpstab::UsolpMode::StatOptimal;
      const auto result = lpstab::run_usolp(cfg, S, family.loss());
      {
        std::lock_guard<std::mutex> lock(locks[1]);
        risks[1].push_back(family.population_risk(result.point) - pop_min);
      }
    }
  });

  bool pass = dopt_worst <= 1e-6;
  std::ostringstream csv;
  csv << "p,d,n,bound,estimator,mc_risk,stderr\n";
  for (int e = 0; e < 2; ++e) {
    double mean = 0.0;
    for (double r : risks[static_cast<std::size_t>(e)]) mean += r;
    const auto count = static_cast<double>(risks[static_cast<std::size_t>(e)].size());
    mean /= count;
    double var = 0.0;
    for (double r : risks[static_cast<std::size_t>(e)]) {
      var += (r - mean) * (r - mean);
    }
    var /= (count - 1.0);
    rows[static_cast<std::size_t>(e)].mc_risk = mean;
    rows[static_cast<std::size_t>(e)].stderr_ = std::sqrt(var / count);
    csv << p << "," << d << "," << n << "," << bound.value << ","
        << rows[static_cast<std::size_t>(e)].name << "," << mean << ","
        << rows[static_cast<std::size_t>(e)].stderr_ << "\n";
    if (mean < bound.value - 3.0 * rows[static_cast<std::size_t>(e)].stderr_) {
      pass = false;
    }
  }
  csv << "# regime=" << bound.regime << " delta=" << delta
      << (delta >= 1.0 ? " (clamped)" : "") << " s=" << s
      << " packing=" << pack.vectors.size()
      << " dopt_max_error=" << dopt_worst << "\n";
  std::cout << csv.str();
  if (!out_path.empty()) open_out(out_path) << csv.str();
  if (!pass) {
    std::cerr << "audit failed: an estimator beat the bound beyond 3 sigma "
                 "or the gap-distance cross-check exceeded 1e-6\n";
    return kExitAssertion;
  }
  return kExitOk;
}

int cmd_glm_demo(double p, int d, int n, double R, std::uint64_t seed,
                 const std::string& out_path) {
  const lpstab::Dataset data = synthetic_glm(seed, n, d, p, 1.0);
  const lpstab::LossModel loss = lpstab::LossModel::logistic();
  lpstab::UsolpConfig cfg;
  cfg.geometry = lpstab::PNormGeometry::for_dimension(p, d);
  cfg.R = R;
  cfg.T = 2000;
  cfg.solver = lpstab::SolverSpec::apgd();
  cfg.L = lpstab::glm_smoothness_bound(data, loss.link_smoothness(),
                                       cfg.geometry.effective_p, 1.0);
  cfg.x0 = Vector::Zero(d);
  cfg.n = n;
  cfg.mode = lpstab::UsolpMode::StatOptimal;
  const auto result = lpstab::run_usolp(cfg, data, loss);

  // held-out Monte-Carlo population risk, 1e5 samples
  const lpstab::Dataset held =
      synthetic_glm(lpstab::mix_seed(seed, 99), 100000, d, p, 1.0);
  double mean = 0.0;
  std::vector<double> vals;
  vals.reserve(held.samples.size());
  for (const auto& z : held.samples) {
    vals.push_back(loss.eval(result.point, z).first);
    mean += vals.back();
  }
  mean /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double t : vals) var += (t - mean) * (t - mean);
  var /= static_cast<double>(vals.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(vals.size()));

  std::ostringstream report;
  report << "p,d,n,alpha,train_risk,population_risk_mc,population_risk_se,"
            "certified\n"
         << p << "," << d << "," << n << "," << result.alpha_used << ","
         << lpstab::empirical_risk(data, loss, result.point).first << ","
         << mean << "," << se << ","
         << (result.trace.fully_certified ? 1 : 0) << "\n";
  std::cout << report.str();
  if (!out_path.empty()) open_out(out_path) << report.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lp-geometry stable-learning toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  std::string out_path;
  std::string config_path;
  auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker pool size");
  auto* out_opt = app.add_option("--out", out_path, "output file path");
  app.add_option("--config", config_path, "JSON config file (flags win)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a named invariant suite");
  std::string suite = "all";
  auto* suite_opt = verify->add_option("suite", suite,
                                       "geometry|objectives|solver|usolp|"
                                       "adversarial|all");

  // usolp-run
  auto* run = app.add_subcommand("usolp-run", "single restart-scheme run");
  double run_p = 2.0, run_R = 1.0;
  int run_d = 8, run_n = 64;
  long run_T = 2000;
  std::string run_mode = "alg1", run_solver = "apgd", run_data,
              run_manifest;
  auto* run_p_opt = run->add_option("--p", run_p, "norm exponent");
  auto* run_d_opt = run->add_option("--d", run_d, "dimension");
  auto* run_n_opt = run->add_option("--n", run_n, "sample count");
  auto* run_T_opt = run->add_option("--T", run_T, "gradient-call target");
  auto* run_R_opt = run->add_option("--R", run_R, "ball radius");
  auto* run_mode_opt = run->add_option("--mode", run_mode, "alg1|stat");
  auto* run_solver_opt = run->add_option("--solver", run_solver, "pgd|apgd");
  auto* run_data_opt = run->add_option("--data", run_data, "input CSV");
  auto* run_manifest_opt =
      run->add_option("--manifest", run_manifest, "manifest JSON path");

  // stability-sweep
  auto* ssweep = app.add_subcommand("stability-sweep",
                                    "stability vs n at a fixed T policy");
  double ss_p = 3.0, ss_R = 1.0, ss_G = 1.0, ss_delta = 0.0;
  int ss_d = 2048, ss_reps = 20;
  long ss_T = 8;
  std::vector<int> ss_grid = {64, 128, 256, 512, 1024};
  auto* ss_p_opt = ssweep->add_option("--p", ss_p, "norm exponent");
  auto* ss_d_opt = ssweep->add_option("--d", ss_d, "dimension");
  auto* ss_T_opt = ssweep->add_option("--T", ss_T, "fixed budget policy");
  auto* ss_R_opt = ssweep->add_option("--R", ss_R, "ball radius");
  auto* ss_G_opt = ssweep->add_option("--G", ss_G, "loss scale");
  auto* ss_delta_opt = ssweep->add_option("--delta", ss_delta, "family bias");
  auto* ss_reps_opt =
      ssweep->add_option("--replicates", ss_reps, "replicates per cell");
  auto* ss_grid_opt = ssweep->add_option("--n-grid", ss_grid, "sample sizes");

  // risk-sweep
  auto* rsweep = app.add_subcommand("risk-sweep",
                                    "excess risk vs n on the hard family");
  double rs_p = 3.0, rs_R = 1.0, rs_G = 1.0;
  int rs_d = 256, rs_reps = 50;
  std::vector<int> rs_grid = {16, 32, 64, 128};
  auto* rs_p_opt = rsweep->add_option("--p", rs_p, "norm exponent");
  auto* rs_d_opt = rsweep->add_option("--d", rs_d, "dimension");
  auto* rs_R_opt = rsweep->add_option("--R", rs_R, "ball radius");
  auto* rs_G_opt = rsweep->add_option("--G", rs_G, "loss scale");
  auto* rs_reps_opt =
      rsweep->add_option("--replicates", rs_reps, "replicates per cell");
  auto* rs_grid_opt = rsweep->add_option("--n-grid", rs_grid, "sample sizes");

  // lowerbound-audit
  auto* audit = app.add_subcommand("lowerbound-audit",
                                   "necessary-condition audit of the bound");
  double lb_p = 3.0, lb_R = 1.0, lb_G = 1.0;
  int lb_d = 512, lb_n = 10, lb_s = 0, lb_reps = 5;
  auto* lb_p_opt = audit->add_option("--p", lb_p, "norm exponent");
  auto* lb_d_opt = audit->add_option("--d", lb_d, "dimension");
  auto* lb_n_opt = audit->add_option("--n", lb_n, "sample count");
  auto* lb_s_opt = audit->add_option("--s", lb_s, "support size (0 = auto)");
  auto* lb_G_opt = audit->add_option("--G", lb_G, "loss scale");
  auto* lb_R_opt = audit->add_option("--R", lb_R, "ball radius");
  auto* lb_reps_opt =
      audit->add_option("--replicates", lb_reps, "datasets per prior point");

  // glm-demo
  auto* demo = app.add_subcommand("glm-demo", "logistic GLM end-to-end demo");
  double gd_p = 2.5, gd_R = 1.0;
  int gd_d = 5, gd_n = 200;
  auto* gd_p_opt = demo->add_option("--p", gd_p, "norm exponent");
  auto* gd_d_opt = demo->add_option("--d", gd_d, "dimension");
  auto* gd_n_opt = demo->add_option("--n", gd_n, "sample count");
  auto* gd_R_opt = demo->add_option("--R", gd_R, "ball radius");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    const json cfg = load_config(config_path);
    merge(cfg, "seed", seed_opt, seed);
    merge(cfg, "jobs", jobs_opt, jobs);
    merge(cfg, "out", out_opt, out_path);

    if (verify->parsed()) {
      merge(cfg, "suite", suite_opt, suite);
      return cmd_verify(suite, seed, out_path);
    }
    if (run->parsed()) {
      merge(cfg, "p", run_p_opt, run_p);
      merge(cfg, "d", run_d_opt, run_d);
      merge(cfg, "n", run_n_opt, run_n);
      merge(cfg, "T", run_T_opt, run_T);
      merge(cfg, "R", run_R_opt, run_R);
      merge(cfg, "mode", run_mode_opt, run_mode);
      merge(cfg, "solver", run_solver_opt, run_solver);
      merge(cfg, "data", run_data_opt, run_data);
      merge(cfg, "manifest", run_manifest_opt, run_manifest);
      return cmd_usolp_run(run_p, run_d, run_n, run_T, run_R, run_mode,
                           run_solver, run_data, seed, out_path, run_manifest);
    }
    if (ssweep->parsed()) {
      merge(cfg, "p", ss_p_opt, ss_p);
      merge(cfg, "d", ss_d_opt, ss_d);
      merge(cfg, "T", ss_T_opt, ss_T);
      merge(cfg, "R", ss_R_opt, ss_R);
      merge(cfg, "G", ss_G_opt, ss_G);
      merge(cfg, "delta", ss_delta_opt, ss_delta);
      merge(cfg, "replicates", ss_reps_opt, ss_reps);
      merge(cfg, "n_grid", ss_grid_opt, ss_grid);
      return cmd_stability_sweep(ss_p, ss_d, ss_grid, ss_T, ss_reps, ss_R,
                                 ss_G, ss_delta, seed, jobs, out_path);
    }
    if (rsweep->parsed()) {
      merge(cfg, "p", rs_p_opt, rs_p);
      merge(cfg, "d", rs_d_opt, rs_d);
      merge(cfg, "R", rs_R_opt, rs_R);
      merge(cfg, "G", rs_G_opt, rs_G);
      merge(cfg, "replicates", rs_reps_opt, rs_reps);
      merge(cfg, "n_grid", rs_grid_opt, rs_grid);
      return cmd_risk_sweep(rs_p, rs_d, rs_grid, rs_reps, rs_R, rs_G, seed,
                            jobs, out_path);
    }
    if (audit->parsed()) {
      merge(cfg, "p", lb_p_opt, lb_p);
      merge(cfg, "d", lb_d_opt, lb_d);
      merge(cfg, "n", lb_n_opt, lb_n);
      merge(cfg, "s", lb_s_opt, lb_s);
      merge(cfg, "G", lb_G_opt, lb_G);
      merge(cfg, "R", lb_R_opt, lb_R);
      merge(cfg, "replicates", lb_reps_opt, lb_reps);
      return cmd_lowerbound_audit(lb_p, lb_d, lb_n, lb_s, lb_G, lb_R, lb_reps,
                                  seed, jobs, out_path);
    }
    if (demo->parsed()) {
      merge(cfg, "p", gd_p_opt, gd_p);
      merge(cfg, "d", gd_d_opt, gd_d);
      merge(cfg, "n", gd_n_opt, gd_n);
      merge(cfg, "R", gd_R_opt, gd_R);
      return cmd_glm_demo(gd_p, gd_d, gd_n, gd_R, seed, out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitConfig;
}
