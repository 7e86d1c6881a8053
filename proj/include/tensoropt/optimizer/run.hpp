#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/optimizer/theory.hpp"
#include "tensoropt/oracles/problem.hpp"
#include "tensoropt/sampler/batch_size.hpp"
#include "tensoropt/sampler/bundle_sampler.hpp"
#include "tensoropt/solvers/model_solvers.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tensoropt {

enum class SigmaPolicy { kAuto, kExplicit };
enum class KappaPolicy { kExact, kCorollary, kExplicit };
enum class RunMode { kDeterministic, kStochastic };

struct RunConfig {
  int p = 3;
  double eps = 1e-6;
  SigmaPolicy sigma_policy = SigmaPolicy::kAuto;
  double sigma = 0.0;                   // used with kExplicit
  KappaPolicy kappa_policy = KappaPolicy::kExact;
  std::vector<double> kappa;            // used with kExplicit
  double diameter = 1.0;                // D
  double radius = 10.0;                 // ball around x0 on which constants are certified
  int max_iter = 1000;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::kDeterministic;
  double delta = 0.1;
  SamplingMode sampling = SamplingMode::kOffline;
  double tau = 4.0;
  double grad_tol = 1e-9;
  int max_inner = 200;
  bool smooth = true;
  std::optional<double> f_star;
  double target_gap = 0.0;              // stop once f − f* <= target (<= 0: use eps)
  double step_tol = 1e-12;
  bool verify = false;                  // verify the inexactness condition per iteration
  int verify_dirs = 16;
  bool keep_iterates = false;           // store every x_k in the trace

  void validate() const {
    if (p != 2 && p != 3) throw InvalidArgument("RunConfig: p must be 2 or 3");
    if (!(eps > 0.0)) throw InvalidArgument("RunConfig: eps must be > 0");
    if (kappa_policy == KappaPolicy::kCorollary && !(diameter > 0.0)) {
      throw InvalidArgument("RunConfig: D must be > 0 for corollary tolerances");
    }
    if (kappa_policy == KappaPolicy::kExplicit && static_cast<int>(kappa.size()) != p) {
      throw InvalidArgument("RunConfig: explicit kappa needs p entries");
    }
    if (!(radius > 0.0)) throw InvalidArgument("RunConfig: radius must be > 0");
    if (max_iter < 0) throw InvalidArgument("RunConfig: max_iter must be >= 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("RunConfig: delta must be in (0, 1]");
    if (!(tau > 2.0)) throw InvalidArgument("RunConfig: tau must be > 2");
    if (mode == RunMode::kStochastic && kappa_policy == KappaPolicy::kExact) {
      throw InvalidArgument("RunConfig: stochastic mode needs positive tolerances");
    }
  }

  double stop_gap() const { return target_gap > 0.0 ? target_gap : eps; }
};

/// Tolerances κ_i selected by the config's policy.
inline InexactnessBudget resolve_budget(const RunConfig& cfg, const LipschitzProfile& prof) {
  InexactnessBudget b;
  b.eps = cfg.eps;
  switch (cfg.kappa_policy) {
    case KappaPolicy::kExact: b.kappa.assign(static_cast<std::size_t>(cfg.p), 0.0); break;
    case KappaPolicy::kCorollary: b.kappa = kappa_defaults(prof.L.at(cfg.p), cfg.diameter, cfg.p); break;
    case KappaPolicy::kExplicit: b.kappa = cfg.kappa; break;
  }
  b.validate(cfg.p);
  return b;
}

/// σ: coupled to τ for p = 3, L_2 for p = 2, unless given explicitly.
inline ModelConfig resolve_model_config(const RunConfig& cfg, const LipschitzProfile& prof,
                                        const InexactnessBudget& budget) {
  ModelConfig m;
  m.p = cfg.p;
  m.tau = cfg.tau;
  m.lp = prof.L.at(cfg.p);
  m.smooth = cfg.smooth;
  if (cfg.sigma_policy == SigmaPolicy::kExplicit) {
    m.sigma = cfg.sigma;
  } else if (cfg.p == 3) {
    m.sigma = coupled_sigma(cfg.tau, m.lp, budget.kappa_at(3));
  } else {
    m.sigma = m.lp;
  }
  m.validate();
  return m;
}

struct IterationRecord {
  int k = 0;
  double f = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();  // f − f*, NaN if f* unknown
  double step_norm = 0.0;     // ‖x_k − x_{k-1}‖
  int inner_iters = 0;        // inner iterations spent producing x_k
  std::int64_t n[3] = {0, 0, 0};  // batch sizes used to produce x_k (m for exact orders)
  OracleCounters calls;       // cumulative component-derivative evaluations up to x_k
  std::optional<ConditionReport> condition;
};

enum class RunStatus { kConverged, kStationary, kMaxIter };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kStationary: return "stationary";
    case RunStatus::kMaxIter: return "max_iter";
  }
  return "unknown";
}

struct RunTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::kMaxIter;
  std::optional<double> f_star;
  Vector x_final;
  ModelConfig model;
  InexactnessBudget budget;
  std::vector<bool> clamped;  // per order, offline batch reached m
  std::vector<Vector> iterates;  // x_0, x_1, ... when keep_iterates is set

  /// First k with gap <= target, or nullopt.
  std::optional<int> first_below(double target) const {
    for (const auto& r : records)
      if (r.gap <= target) return r.k;
    return std::nullopt;
  }
};

/// Outer run aborted by an inner-solver failure; carries the trace so far.
class RunFailure : public Error {
 public:
  RunFailure(const std::string& what, RunTrace trace) : Error(what), trace_(std::move(trace)) {}
  const RunTrace& trace() const { return trace_; }

 private:
  RunTrace trace_;
};

/// Supplies the bundle at x for iteration k and adds its cost to `cost`.
using BundleOracle = std::function<DerivativeBundle(const Vector& x, int k, OracleCounters& cost)>;

namespace detail {

inline void fill_batch_sizes(IterationRecord& rec, const OracleCounters& before, const OracleCounters& after) {
  rec.n[0] = after.grad - before.grad;
  rec.n[1] = after.hess - before.hess;
  rec.n[2] = after.third - before.third;
}

inline RunTrace run_loop(const Problem& prob, const Vector& x0, const RunConfig& cfg, const InexactnessBudget& budget,
                         const ModelConfig& model, const BundleOracle& oracle, const Problem* verify_prob) {
  require_same_dim(x0.size(), prob.dim(), "run");
  RunTrace trace;
  trace.f_star = cfg.f_star;
  trace.model = model;
  trace.budget = budget;
  SubsolverConfig sub;
  sub.tau = cfg.tau;
  sub.grad_tol = cfg.grad_tol;
  sub.max_inner = cfg.max_inner;

  Vector x = x0;
  OracleCounters calls;
  auto gap_of = [&](double f) {
    return cfg.f_star ? f - *cfg.f_star : std::numeric_limits<double>::quiet_NaN();
  };
  IterationRecord r0;
  r0.f = prob.value(x);
  r0.gap = gap_of(r0.f);
  trace.records.push_back(r0);
  if (cfg.keep_iterates) trace.iterates.push_back(x);

  const double stop = cfg.stop_gap();
  for (int k = 0;; ++k) {
    if (cfg.f_star && trace.records.back().gap <= stop) {
      trace.status = RunStatus::kConverged;
      break;
    }
    if (k >= cfg.max_iter) {
      trace.status = RunStatus::kMaxIter;
      break;
    }
    const OracleCounters before = calls;
    const DerivativeBundle bundle = oracle(x, k, calls);
    IterationRecord rec;
    rec.k = k + 1;
    if (verify_prob) {
      rec.condition = verify_condition(*verify_prob, bundle, budget, cfg.verify_dirs, cfg.seed * 1000003ULL + k);
    }
    StepResult step;
    try {
      step = solve_model(bundle, budget, model, sub);
    } catch (const SubsolverFailure& e) {
      trace.x_final = x;
      throw RunFailure(std::string("iteration ") + std::to_string(k) + ": " + e.what(), std::move(trace));
    }
    x += step.s;
    rec.f = prob.value(x);
    rec.gap = gap_of(rec.f);
    rec.step_norm = step.s.norm();
    rec.inner_iters = step.inner_iterations;
    rec.calls = calls;
    fill_batch_sizes(rec, before, calls);
    trace.records.push_back(rec);
    if (cfg.keep_iterates) trace.iterates.push_back(x);
    if (rec.step_norm <= cfg.step_tol) {
      trace.status = RunStatus::kStationary;
      break;
    }
  }
  trace.x_final = x;
  return trace;
}

}  // namespace detail

/// Inexact tensor method: x_{k+1} = x_k + argmin of the model built from
/// the oracle's bundle (ζ unless cfg.smooth is false). Without an oracle the
/// bundles are exact.
inline RunTrace itm_run(const Problem& prob, const Vector& x0, const RunConfig& cfg,
                        const BundleOracle& oracle = nullptr) {
  cfg.validate();
  const LipschitzProfile prof = prob.lipschitz_profile(x0, cfg.radius);
  const InexactnessBudget budget = resolve_budget(cfg, prof);
  const ModelConfig model = resolve_model_config(cfg, prof, budget);
  BundleOracle use = oracle;
  if (!use) {
    use = [&](const Vector& x, int, OracleCounters& cost) { return exact_bundle(prob, x, cfg.p, &cost); };
  }
  return detail::run_loop(prob, x0, cfg, budget, model, use, cfg.verify ? &prob : nullptr);
}

/// Stochastic tensor method: per iteration, lemma-sized mini-batches (δ split
/// evenly over orders), a sampled bundle, and a model step.
inline RunTrace stm_run(const Problem& prob, const Vector& x0, const RunConfig& cfg) {
  cfg.validate();
  const LipschitzProfile prof = prob.lipschitz_profile(x0, cfg.radius);
  const InexactnessBudget budget = resolve_budget(cfg, prof);
  const ModelConfig model = resolve_model_config(cfg, prof, budget);
  const BatchPlan plan = make_batch_plan(prob, budget, cfg.p, cfg.delta, cfg.sampling, prof);
  std::mt19937_64 rng(cfg.seed);
  const BundleOracle oracle = [&](const Vector& x, int, OracleCounters& cost) {
    return sample_bundle(prob, x, plan, rng, &cost);
  };
  RunTrace trace = detail::run_loop(prob, x0, cfg, budget, model, oracle, cfg.verify ? &prob : nullptr);
  trace.clamped = plan.clamped;
  return trace;
}

/// Iterations k >= 1 where f_k > f_{k-1} + tol·max(1, |f_{k-1}|).
inline std::vector<int> monotonicity_guard(const std::vector<IterationRecord>& records, double tol = 1e-12) {
  std::vector<int> out;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const double prev = records[k - 1].f;
    if (records[k].f > prev + tol * std::max(1.0, std::abs(prev))) out.push_back(records[k].k);
  }
  return out;
}

struct ReferenceSolution {
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// High-accuracy minimizer by the exact second-order method (cubic
/// regularization, σ = L_2) run until the gradient or the step vanishes.
inline ReferenceSolution reference_minimum(const Problem& prob, const Vector& x0, double grad_tol = 1e-13,
                                           int max_iter = 500) {
  const LipschitzProfile prof = prob.lipschitz_profile(x0, 1.0);
  ModelConfig model;
  model.p = 2;
  model.lp = prof.L[2];
  model.sigma = prof.L[2];
  model.smooth = false;
  const InexactnessBudget budget = InexactnessBudget::exact(2, 1.0);
  ReferenceSolution ref;
  ref.x = x0;
  for (; ref.iterations < max_iter; ++ref.iterations) {
    const DerivativeBundle b = exact_bundle(prob, ref.x, 2);
    ref.grad_norm = b.g.norm();
    if (ref.grad_norm <= grad_tol) break;
    const Vector s = solve_omega_p2(b, budget, model);
    if (s.norm() <= 1e-16 * std::max(1.0, ref.x.norm())) break;
    ref.x += s;
  }
  ref.f = prob.value(ref.x);
  ref.grad_norm = prob.gradient(ref.x).norm();
  return ref;
}

/// First-order baselines with step 1/L_1: plain gradient descent, or
/// Nesterov's accelerated schedule y = x_k + (k-1)/(k+2)(x_k − x_{k-1}).
inline RunTrace gd_baseline(const Problem& prob, const Vector& x0, double eps, int max_iter, bool accelerated,
                            std::optional<double> f_star = std::nullopt, double radius = 10.0) {
  require_same_dim(x0.size(), prob.dim(), "gd_baseline");
  const double l1 = prob.lipschitz_profile(x0, radius).L[1];
  const std::int64_t m = prob.components();
  RunTrace trace;
  trace.f_star = f_star;
  auto gap_of = [&](double f) { return f_star ? f - *f_star : std::numeric_limits<double>::quiet_NaN(); };
  Vector x = x0, x_prev = x0;
  OracleCounters calls;
  IterationRecord r0;
  r0.f = prob.value(x);
  r0.gap = gap_of(r0.f);
  trace.records.push_back(r0);
  for (int k = 0;; ++k) {
    if (f_star && trace.records.back().gap <= eps) {
      trace.status = RunStatus::kConverged;
      break;
    }
    if (k >= max_iter) {
      trace.status = RunStatus::kMaxIter;
      break;
    }
    const Vector y = accelerated ? Vector(x + (static_cast<double>(k) - 1.0) / (k + 2.0) * (x - x_prev)) : x;
    const Vector g = prob.gradient(k == 0 ? x : y);
    calls.grad += m;
    const Vector next = (k == 0 ? x : y) - g / l1;
    IterationRecord rec;
    rec.k = k + 1;
    rec.step_norm = (next - x).norm();
    x_prev = x;
    x = next;
    rec.f = prob.value(x);
    rec.gap = gap_of(rec.f);
    rec.n[0] = m;
    rec.calls = calls;
    trace.records.push_back(rec);
    if (g.norm() == 0.0) {
      trace.status = RunStatus::kStationary;
      break;
    }
  }
  trace.x_final = x;
  return trace;
}

}  // namespace tensoropt
