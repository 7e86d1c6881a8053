#pragma once

#include "tensoropt/bench/config.hpp"
#include "tensoropt/bench/rate_fit.hpp"
#include "tensoropt/bench/trace_io.hpp"
#include "tensoropt/optimizer/run.hpp"
#include "tensoropt/optimizer/theory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace tensoropt::bench {

struct CellResult {
  double eps = 0.0;
  std::uint64_t seed = 0;
  RunTrace trace;
  std::optional<RateFit> fit;
  std::string fit_note;               // why no fit
  double diameter = 0.0;
  std::int64_t budget_t = -1;         // iteration budget, -1 for gd
  double bound_final = std::nan("");  // residual bound at the last iterate
  std::vector<int> violations;        // monotonicity guard
  std::string error;                  // runtime failure, empty on success
  std::string trace_path;

  bool reached() const { return trace.first_below(eps).has_value(); }
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  ReferenceSolution reference;
  std::string summary_path;
};

inline std::string cell_name(double eps, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "eps%.6g_seed%llu", eps, static_cast<unsigned long long>(seed));
  return buf;
}

/// Runs f(0), ..., f(count-1) on up to `jobs` threads.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Bound of the rate theorem evaluated at t = k - 1 for the iterate x_k.
inline double bound_for_record(const RunTrace& trace, int k, double diameter) {
  if (k < 1) return std::nan("");
  return theoretical_residual_bound(k - 1.0, trace.budget.kappa, trace.budget.eps, diameter, trace.model.lp,
                                    trace.model.sigma, trace.model.p);
}

inline CellResult run_cell(const Problem& prob, const ExperimentConfig& cfg, const ReferenceSolution& ref,
                           double eps, std::uint64_t seed) {
  const Vector x0 = Vector::Zero(prob.dim());
  CellResult c;
  c.eps = eps;
  c.seed = seed;
  RunConfig rc = cfg.run;
  rc.eps = eps;
  rc.seed = seed;
  rc.f_star = ref.f;
  rc.mode = cfg.method == Method::kStm ? RunMode::kStochastic : RunMode::kDeterministic;
  if (cfg.auto_diameter) {
    const double d = 2.0 * (x0 - ref.x).norm();
    rc.diameter = d > 0.0 ? d : 1.0;
  }
  c.diameter = rc.diameter;
  try {
    switch (cfg.method) {
      case Method::kItm: c.trace = itm_run(prob, x0, rc); break;
      case Method::kStm: c.trace = stm_run(prob, x0, rc); break;
      case Method::kGd: c.trace = gd_baseline(prob, x0, rc.stop_gap(), rc.max_iter, cfg.accelerated, ref.f, rc.radius); break;
    }
  } catch (const RunFailure& e) {
    c.error = e.what();
    c.trace = e.trace();
  }
  try {
    c.fit = fit_rate(c.trace, rc.p);
  } catch (const FitError& e) {
    c.fit_note = e.what();
  }
  c.violations = monotonicity_guard(c.trace.records);
  if (cfg.method != Method::kGd && !c.trace.records.empty()) {
    c.budget_t = iteration_budget(eps, c.trace.model.lp, c.trace.model.sigma, c.diameter, rc.p);
    c.bound_final = bound_for_record(c.trace, c.trace.records.back().k, c.diameter);
  }
  return c;
}

inline std::string overlay_csv(const CellResult& c) {
  std::ostringstream os;
  os << "k,f_gap,bound\n";
  for (const auto& r : c.trace.records) {
    os << r.k << ',' << fmt_g17(r.gap) << ',';
    if (c.budget_t >= 0 && r.k >= 1) os << fmt_g17(bound_for_record(c.trace, r.k, c.diameter));
    os << '\n';
  }
  return os.str();
}

inline constexpr const char* kSummaryHeader =
    "method,p,eps,seed,status,iterations,final_gap,k_reach,grad_calls,hess_calls,third_calls,clamped,"
    "slope,intercept,k_lo,k_hi,fit_rms,diameter,budget_T,bound_final,violations,error";

inline std::string summary_csv(const ExperimentConfig& cfg, const std::vector<CellResult>& cells) {
  std::ostringstream os;
  os << kSummaryHeader << '\n';
  for (const auto& c : cells) {
    const auto& last = c.trace.records.back();
    const auto reach = c.trace.first_below(c.eps);
    bool clamped = false;
    for (bool b : c.trace.clamped) clamped = clamped || b;
    os << to_string(cfg.method) << ',' << cfg.run.p << ',' << fmt_g17(c.eps) << ',' << c.seed << ','
       << (c.error.empty() ? to_string(c.trace.status) : "failed") << ',' << last.k << ',' << fmt_g17(last.gap)
       << ',' << (reach ? std::to_string(*reach) : "") << ',' << last.calls.grad << ',' << last.calls.hess << ','
       << last.calls.third << ',' << (clamped ? 1 : 0) << ',';
    if (c.fit) {
      os << fmt_g17(c.fit->slope) << ',' << fmt_g17(c.fit->intercept) << ',' << c.fit->k_lo << ',' << c.fit->k_hi
         << ',' << fmt_g17(c.fit->rms);
    } else {
      os << ",,,,";
    }
    os << ',' << fmt_g17(c.diameter) << ',' << (c.budget_t >= 0 ? std::to_string(c.budget_t) : "") << ','
       << (std::isnan(c.bound_final) ? "" : fmt_g17(c.bound_final)) << ',' << c.violations.size() << ',';
    std::string err = c.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << err << '\n';
  }
  return os.str();
}

/// Runs every (ε, seed) cell, writing per-cell traces and bound overlays as
/// soon as each cell finishes, then the summary and the resolved config.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1, bool write = true) {
  cfg.validate();
  const Problem prob = make_problem(cfg.problem);
  ExperimentResult res;
  res.reference = reference_minimum(prob, Vector::Zero(prob.dim()));

  struct Cell {
    double eps;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (double e : cfg.eps)
    for (std::uint64_t s : cfg.seeds) grid.push_back({e, s});
  res.cells.resize(grid.size());

  const std::filesystem::path dir(cfg.out_dir);
  std::mutex err_mu;
  std::string io_error;
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    CellResult c = run_cell(prob, cfg, res.reference, grid[i].eps, grid[i].seed);
    if (write) {
      try {
        const std::string name = cell_name(c.eps, c.seed);
        c.trace_path = (dir / ("trace_" + name + ".csv")).string();
        atomic_write(c.trace_path, trace_csv(c.trace));
        atomic_write(dir / ("bound_" + name + ".csv"), overlay_csv(c));
      } catch (const IoError& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (io_error.empty()) io_error = e.what();
      }
    }
    res.cells[i] = std::move(c);
  });
  if (!io_error.empty()) throw IoError(io_error);
  if (write) {
    res.summary_path = (dir / "summary.csv").string();
    atomic_write(res.summary_path, summary_csv(cfg, res.cells));
    atomic_write(dir / "config.yaml", to_yaml(cfg));
  }
  return res;
}

struct ComplexityRow {
  double eps = 0.0;
  double iterations = 0.0;  // mean over seeds of outer iterations to reach ε
  double grad = 0.0;        // mean totals of component-derivative samples
  double hess = 0.0;
  double third = 0.0;
  std::int64_t n[3] = {0, 0, 0};  // per-iteration plan sizes (0 = exact)
  int reached = 0;                // seeds that reached ε
  int runs = 0;
};

struct ComplexitySummary {
  std::vector<ComplexityRow> rows;
  double q_iter = std::nan("");
  double q_grad = std::nan("");
  double q_hess = std::nan("");
  double q_third = std::nan("");
  bool clamped = false;   // some batch hit m: exponents are report-only
  bool monotone = true;   // totals nondecreasing as ε shrinks
  bool all_reached = true;
};

/// Exponents predicted for order p: iterations ε^{-1/p}, per-iteration
/// batch of order i ε^{-2(p-i+1)/p}.
inline double theory_exponent_total(int i, int p) { return 2.0 * (p - i + 1) / p + 1.0 / p; }

/// q with total ∝ ε^{-q}: the least-squares slope of log(total) on log(1/ε).
inline double fit_exponent(const std::vector<double>& eps, const std::vector<double>& totals) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(totals[i] > 0.0)) continue;
    x.push_back(-std::log(eps[i]));
    y.push_back(std::log(totals[i]));
  }
  if (x.size() < 2) return std::nan("");
  return least_squares(x, y).slope;
}

inline ComplexitySummary summarize_complexity(const ExperimentConfig& cfg, const ExperimentResult& res) {
  ComplexitySummary s;
  std::vector<double> eps_sorted = cfg.eps;
  std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
  for (double e : eps_sorted) {
    ComplexityRow row;
    row.eps = e;
    for (const auto& c : res.cells) {
      if (c.eps != e) continue;
      ++row.runs;
      const auto reach = c.trace.first_below(e);
      const IterationRecord& r = reach ? c.trace.records[static_cast<std::size_t>(*reach)] : c.trace.records.back();
      if (reach) ++row.reached;
      row.iterations += r.k;
      row.grad += static_cast<double>(r.calls.grad);
      row.hess += static_cast<double>(r.calls.hess);
      row.third += static_cast<double>(r.calls.third);
      if (c.trace.records.size() > 1) {
        for (int i = 0; i < 3; ++i) row.n[i] = c.trace.records[1].n[i];
      }
      for (bool b : c.trace.clamped) s.clamped = s.clamped || b;
    }
    if (row.runs > 0) {
      row.iterations /= row.runs;
      row.grad /= row.runs;
      row.hess /= row.runs;
      row.third /= row.runs;
    }
    s.all_reached = s.all_reached && row.reached == row.runs;
    s.rows.push_back(row);
  }
  std::vector<double> e, it, g, h, t;
  for (const auto& r : s.rows) {
    e.push_back(r.eps);
    it.push_back(r.iterations);
    g.push_back(r.grad);
    h.push_back(r.hess);
    t.push_back(r.third);
  }
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    const auto& a = s.rows[i - 1];
    const auto& b = s.rows[i];
    if (b.grad < a.grad || b.hess < a.hess || b.third < a.third) s.monotone = false;
  }
  s.q_iter = fit_exponent(e, it);
  s.q_grad = fit_exponent(e, g);
  s.q_hess = fit_exponent(e, h);
  s.q_third = fit_exponent(e, t);
  return s;
}

inline std::string complexity_csv(const ComplexitySummary& s) {
  std::ostringstream os;
  os << "eps,iterations,grad_calls,hess_calls,third_calls,n1,n2,n3,reached,runs\n";
  for (const auto& r : s.rows) {
    os << fmt_g17(r.eps) << ',' << fmt_g17(r.iterations) << ',' << fmt_g17(r.grad) << ',' << fmt_g17(r.hess) << ','
       << fmt_g17(r.third) << ',' << r.n[0] << ',' << r.n[1] << ',' << r.n[2] << ',' << r.reached << ',' << r.runs
       << '\n';
  }
  return os.str();
}

inline std::string exponents_csv(const ComplexitySummary& s, int p) {
  std::ostringstream os;
  os << "quantity,fitted,theory,report_only\n";
  const int ro = s.clamped ? 1 : 0;
  os << "iterations," << fmt_g17(s.q_iter) << ',' << fmt_g17(1.0 / p) << ',' << ro << '\n';
  os << "grad_calls," << fmt_g17(s.q_grad) << ',' << fmt_g17(theory_exponent_total(1, p)) << ',' << ro << '\n';
  os << "hess_calls," << fmt_g17(s.q_hess) << ',' << fmt_g17(theory_exponent_total(2, p)) << ',' << ro << '\n';
  if (p == 3) os << "third_calls," << fmt_g17(s.q_third) << ',' << fmt_g17(theory_exponent_total(3, p)) << ',' << ro << '\n';
  return os.str();
}

/// run_experiment plus the per-ε aggregation; writes complexity.csv and
/// exponents.csv next to the summary.
inline ComplexitySummary complexity_sweep(const ExperimentConfig& cfg, int jobs = 1, bool write = true,
                                          ExperimentResult* out = nullptr) {
  if (cfg.method != Method::kStm) throw ConfigError(cfg.source + ": field 'method': sweep needs stm");
  ExperimentResult res = run_experiment(cfg, jobs, write);
  ComplexitySummary s = summarize_complexity(cfg, res);
  if (write) {
    const std::filesystem::path dir(cfg.out_dir);
    atomic_write(dir / "complexity.csv", complexity_csv(s));
    atomic_write(dir / "exponents.csv", exponents_csv(s, cfg.run.p));
  }
  if (out) *out = std::move(res);
  return s;
}

struct ConditionRates {
  std::vector<double> pass_rate;  // per order
  int trials = 0;
};

/// Fraction of sampled bundles meeting the inexactness condition at points
/// drawn uniformly from the unit ball around the origin.
inline ConditionRates condition_pass_rates(const ExperimentConfig& cfg, double eps, int trials, std::uint64_t seed) {
  const Problem prob = make_problem(cfg.problem);
  RunConfig rc = cfg.run;
  rc.eps = eps;
  const Vector x0 = Vector::Zero(prob.dim());
  if (cfg.auto_diameter) {
    const double d = 2.0 * reference_minimum(prob, x0).x.norm();
    rc.diameter = d > 0.0 ? d : 1.0;
  }
  const LipschitzProfile prof = prob.lipschitz_profile(x0, rc.radius);
  const InexactnessBudget budget = resolve_budget(rc, prof);
  const BatchPlan plan = make_batch_plan(prob, budget, rc.p, rc.delta, rc.sampling, prof);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ConditionRates out;
  out.trials = trials;
  out.pass_rate.assign(static_cast<std::size_t>(rc.p), 0.0);
  for (int t = 0; t < trials; ++t) {
    Vector x(prob.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    x *= std::pow(unif(rng), 1.0 / static_cast<double>(x.size())) / x.norm();
    const DerivativeBundle b = sample_bundle(prob, x, plan, rng);
    const ConditionReport rep = verify_condition(prob, b, budget, rc.verify_dirs, seed + static_cast<std::uint64_t>(t));
    for (int i = 0; i < rc.p; ++i) out.pass_rate[static_cast<std::size_t>(i)] += rep.pass[static_cast<std::size_t>(i)];
  }
  for (double& r : out.pass_rate) r /= std::max(trials, 1);
  return out;
}

}  // namespace tensoropt::bench
