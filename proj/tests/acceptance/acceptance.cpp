// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
//
// Exit status is 0 iff every selected criterion passes.

#include "support/bundles.hpp"
#include "support/oracles.hpp"
#include "tensoropt/bench/experiment.hpp"
#include "tensoropt/bench/rate_fit.hpp"
#include "tensoropt/model/models.hpp"
#include "tensoropt/model/residual_checks.hpp"
#include "tensoropt/optimizer/run.hpp"
#include "tensoropt/optimizer/theory.hpp"
#include "tensoropt/sampler/batch_size.hpp"
#include "tensoropt/sampler/bundle_sampler.hpp"
#include "tensoropt/solvers/bregman.hpp"
#include "tensoropt/solvers/model_solvers.hpp"
#include "tensoropt/solvers/quartic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace tensoropt;
using testing_support::random_in_ball;
using testing_support::random_perturbed_bundle;
using testing_support::random_vec;

namespace {

// Pinned tolerances.
constexpr double kMajorizeTol = 1e-10;     // f(x+s) <= ω(s) + tol
constexpr double kSmoothTol = 1e-12;       // ω(s) <= ζ(s) + tol
constexpr double kConvexTol = 1e-6;        // λ_min of FD Hessian
constexpr double kResidualSlack = 1e-8;
constexpr double kSandwichTol = 1e-8;
constexpr double kQuarticObjTol = 1e-6;
constexpr double kInnerGradTol = 1e-9;
constexpr int kInnerMax = 200;
constexpr double kCorollaryRelTol = 1e-9;
constexpr double kPassRate = 0.90;
constexpr double kSlopeTol = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

ModelConfig model_config(int p, double sigma, double lp, bool smooth = true) {
  ModelConfig c;
  c.p = p;
  c.sigma = sigma;
  c.lp = lp;
  c.smooth = smooth;
  return c;
}

InexactnessBudget corollary_budget(double eps, double lp, double diameter, int p) {
  return {eps, kappa_defaults(lp, diameter, p)};
}

// 1. f(x+s) <= ω(s) and ω(s) <= ζ(s) for condition-passing bundles.
Outcome criterion_1() {
  std::mt19937_64 rng(101);
  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(20), 3.0);
  int viol_major = 0, viol_smooth = 0, samples = 0;
  double worst_major = -1e300, worst_smooth = -1e300;
  for (int p : {2, 3}) {
    const InexactnessBudget bud = corollary_budget(1e-2, prof.L[p], 2.0, p);
    const ModelConfig cfg = model_config(p, prof.L[p], prof.L[p]);
    for (int t = 0; t < 10000; ++t) {
      const Vector x = random_in_ball(20, 2.0, rng);
      const DerivativeBundle b = random_perturbed_bundle(prob, x, p, bud, rng);
      const Vector s = random_in_ball(20, 1.0, rng);
      const double om = omega_eval(b, bud, cfg, s);
      const double ze = zeta_eval(b, bud, cfg, s);
      const double d1 = prob.value(x + s) - om;
      const double d2 = om - ze;
      worst_major = std::max(worst_major, d1);
      worst_smooth = std::max(worst_smooth, d2);
      viol_major += d1 > kMajorizeTol;
      viol_smooth += d2 > kSmoothTol;
      ++samples;
    }
  }
  return {viol_major == 0 && viol_smooth == 0,
          fmt("%d samples (p=2,3); violations f<=omega: %d (max f-omega %.3g), omega<=zeta: %d (max %.3g)", samples,
              viol_major, worst_major, viol_smooth, worst_smooth)};
}

// 2. λ_min of the finite-difference Hessians of ω and ζ.
Outcome criterion_2() {
  std::mt19937_64 rng(102);
  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(20), 4.0);
  std::uniform_real_distribution<double> u(1.0, 3.0);
  double worst = 1e300;
  int bad = 0, points = 0;
  for (int p : {2, 3}) {
    const InexactnessBudget bud = corollary_budget(1e-2, prof.L[p], 2.0, p);
    for (int t = 0; t < 500; ++t) {
      const ModelConfig cfg = model_config(p, u(rng) * prof.L[p], prof.L[p]);
      const Vector x = random_in_ball(20, 2.0, rng);
      const DerivativeBundle b = random_perturbed_bundle(prob, x, p, bud, rng);
      const Vector s = random_in_ball(20, 2.0, rng);
      const Matrix ho = oracle::fd_jacobian([&](const Vector& y) { return omega_grad(b, bud, cfg, y); }, s, 1e-5);
      const Matrix hz = oracle::fd_jacobian([&](const Vector& y) { return zeta_grad(b, bud, cfg, y); }, s, 1e-5);
      const double e = std::min(oracle::min_eig(ho), oracle::min_eig(hz));
      worst = std::min(worst, e);
      bad += e < -kConvexTol;
      ++points;
    }
  }
  return {bad == 0, fmt("%d points (p=2,3, sigma in [L_p, 3L_p]); min eigenvalue %.3g; below -1e-6: %d", points, worst, bad)};
}

// 3. The three Taylor-residual inequalities.
Outcome criterion_3() {
  std::mt19937_64 rng(103);
  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(20), 3.0);
  int bad[3] = {0, 0, 0}, total = 0;
  double worst = -1e300;  // max lhs − rhs
  for (int p : {2, 3}) {
    const InexactnessBudget bud = corollary_budget(1e-2, prof.L[p], 2.0, p);
    for (int t = 0; t < 1000; ++t) {
      const Vector x = random_in_ball(20, 2.0, rng);
      const Vector s = random_in_ball(20, 1.0, rng);
      const DerivativeBundle b = random_perturbed_bundle(prob, x, p, bud, rng);
      const ResidualReport r = check_residual_bounds(prob, b, bud, prof.L[p], s, kResidualSlack);
      bad[0] += !r.value.holds;
      bad[1] += !r.gradient.holds;
      bad[2] += !r.hessian.holds;
      worst = std::max({worst, r.value.lhs - r.value.rhs, r.gradient.lhs - r.gradient.rhs,
                        r.hessian.lhs - r.hessian.rhs});
      ++total;
    }
  }
  return {bad[0] + bad[1] + bad[2] == 0,
          fmt("%d (x,s) pairs (p=2,3); violations value/grad/hess = %d/%d/%d; max lhs-rhs %.3g", total, bad[0], bad[1],
              bad[2], worst)};
}

// 4. ∇²ρ ⪯ ∇²ζ ⪯ 3∇²ρ with τ = 4 and the σ coupling.
Outcome criterion_4() {
  std::mt19937_64 rng(104);
  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(20), 4.0);
  const double tau = 4.0, K = relative_smoothness_constant(tau);
  const BatchPlan plan = uniform_batch_plan(3, 64, SamplingMode::kOffline);
  double worst_lo = 1e300, worst_hi = 1e300;
  int bad = 0, total = 0;
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_in_ball(20, 3.0, rng);
    DerivativeBundle b;
    InexactnessBudget bud;
    if (t % 2 == 0) {
      b = exact_bundle(prob, x, 3);
      bud = corollary_budget(1e-3, prof.L[3], 2.0, 3);
    } else {
      // Sampled bundle; tolerances sized so the condition holds for it.
      b = sample_bundle(prob, x, plan, rng);
      bud = InexactnessBudget{1e-3, {1.0, 1.0, 1.0}};
      const ConditionReport rep = verify_condition(prob, b, bud, 32, 7 + t);
      for (int i = 0; i < 3; ++i) {
        const double f = i == 2 ? kThirdOrderSafety : 1.0;
        bud.kappa[static_cast<std::size_t>(i)] = std::max(1.1 * f * rep.ratio[static_cast<std::size_t>(i)], 0.1);
      }
    }
    const ModelConfig cfg = coupled_model_config(model_config(3, 1.0, prof.L[3]), bud, tau);
    const ReferenceFunction rho = reference_function(b, bud, cfg);
    for (int k = 0; k < 20; ++k) {
      const Vector h = random_vec(20, rng, std::pow(10.0, std::uniform_real_distribution<double>(-3, 0.5)(rng)));
      const Matrix hz = zeta_hess(b, bud, cfg, h);
      const Matrix hr = rho.hess(h);
      const double lo = oracle::min_eig(hz - hr);
      const double hi = oracle::min_eig(K * hr - hz);
      worst_lo = std::min(worst_lo, lo);
      worst_hi = std::min(worst_hi, hi);
      bad += lo < -kSandwichTol || hi < -kSandwichTol;
      ++total;
    }
  }
  return {bad == 0, fmt("%d points, K(4)=%.0f; min eig(Hz-Hr) %.3g, min eig(3Hr-Hz) %.3g; violations %d", total, K,
                        worst_lo, worst_hi, bad)};
}

// 5. Quartic solver against brute force; Bregman inner loop on logistic.
Outcome criterion_5() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int mismatch = 0, hard = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 1 + t % 5;
    RegularizedQuartic q;
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) g.col(i) = random_vec(n, rng);
    q.B = (0.5 * (g + g.transpose())).eval();
    q.c = random_vec(n, rng);
    q.beta = 1.0;
    q.a = 2.0 * u(rng) - 1.0;
    q.b = 0.1 + 2.0 * u(rng);
    if (t % 7 == 3 && n > 1) {
      // c orthogonal to the bottom eigenvector: hard-case candidate.
      Eigen::SelfAdjointEigenSolver<Matrix> es(q.B);
      const Vector v = es.eigenvectors().col(0);
      q.c -= v.dot(q.c) * v;
      q.c *= 1e-3;
      ++hard;
    }
    const Vector h = solve_regularized_quartic(q);
    const oracle::BruteResult br = oracle::multistart_minimize([&](const Vector& y) { return q.value(y); },
                                                               [&](const Vector& y) { return q.grad(y); }, n, rng);
    const double diff = q.value(h) - br.value;
    worst = std::max(worst, std::abs(diff));
    mismatch += std::abs(diff) > kQuarticObjTol;
  }

  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(20), 4.0);
  const BatchPlan plan = uniform_batch_plan(3, 100, SamplingMode::kOffline);
  int slow = 0, nonmono = 0, gradbad = 0, max_it = 0, trials = 0;
  double worst_grad = 0.0;
  for (int t = 0; t < 40; ++t) {
    const Vector x = random_in_ball(20, 3.0, rng);
    const DerivativeBundle b = t % 2 ? sample_bundle(prob, x, plan, rng) : exact_bundle(prob, x, 3);
    const InexactnessBudget bud = t % 4 < 2 ? InexactnessBudget::exact(3, 1e-3)
                                            : corollary_budget(1e-3, prof.L[3], 2.0, 3);
    SubsolverConfig sub;
    sub.max_inner = kInnerMax;
    sub.grad_tol = kInnerGradTol / std::max(1.0, b.g.norm());  // absolute 1e-9
    const ModelConfig cfg = coupled_model_config(model_config(3, 1.0, prof.L[3]), bud, sub.tau);
    try {
      const SubsolverResult r = bregman_minimize_zeta_trace(b, bud, cfg, sub);
      const double gn = zeta_grad(b, bud, cfg, r.s).norm();
      worst_grad = std::max(worst_grad, gn);
      max_it = std::max(max_it, r.iterations);
      gradbad += gn > kInnerGradTol;
      nonmono += !increase_violations(r.model_values).empty();
    } catch (const SubsolverFailure&) {
      ++slow;
    }
    ++trials;
  }
  const bool ok = mismatch == 0 && slow == 0 && nonmono == 0 && gradbad == 0;
  return {ok, fmt("quartic: 100 instances (%d hard-case), max |obj diff| %.3g, mismatches %d; bregman: %d trials, "
                  "max inner %d, max |grad| %.3g, over-budget %d, non-monotone %d, grad>1e-9 %d",
                  hard, worst, mismatch, trials, max_it, worst_grad, slow, nonmono, gradbad)};
}

// 6. Exact ITM on logistic, p = 2 and 3.
Outcome criterion_6() {
  const Problem prob = make_logistic(20, 500, 1e-3, 1);
  const Vector x0 = Vector::Zero(20);
  const ReferenceSolution ref = reference_minimum(prob, x0);
  const double eps = 1e-8;
  bool ok = true;
  std::ostringstream os;
  os << fmt("f*=%.15g (grad %.1e)", ref.f, ref.grad_norm);
  for (int p : {2, 3}) {
    RunConfig cfg;
    cfg.p = p;
    cfg.eps = eps;
    cfg.kappa_policy = KappaPolicy::kExact;
    cfg.smooth = p == 3;  // p = 2: the exact cubic model
    cfg.f_star = ref.f;
    cfg.target_gap = 1e-14;
    cfg.max_iter = 2000;
    cfg.keep_iterates = true;
    const RunTrace tr = itm_run(prob, x0, cfg);

    const auto viol = monotonicity_guard(tr.records);
    double d = 0.0;
    for (const Vector& x : tr.iterates) d = std::max(d, (x - ref.x).norm());
    int bound_viol = 0;
    double worst_ratio = 0.0;
    for (const auto& r : tr.records) {
      if (r.k < 1) continue;
      const double bnd = theoretical_residual_bound(r.k - 1.0, tr.budget.kappa, eps, d, tr.model.lp, tr.model.sigma, p);
      worst_ratio = std::max(worst_ratio, r.gap / bnd);
      bound_viol += r.gap > bnd;
    }
    bench::WindowPolicy w;
    w.floor_factor = 10.0;
    w.f_star = ref.f;
    double slope = 0.0;
    bool slope_ok = false;
    try {
      slope = bench::fit_rate(tr, p, w).slope;
      slope_ok = slope <= -(p - 0.5);
    } catch (const bench::FitError& e) {
      os << " fit error: " << e.what();
    }
    const auto reach = tr.first_below(eps);
    const std::int64_t budget = iteration_budget(eps, tr.model.lp, tr.model.sigma, d, p);
    const bool budget_ok = reach && *reach <= budget;
    const bool pass = viol.empty() && bound_viol == 0 && slope_ok && budget_ok;
    ok = ok && pass;
    os << fmt(" | p=%d: (a) violations %zu (b) gap>bound %d, max gap/bound %.2e, D=%.3f (c) slope %.3f <= %.1f (d) "
              "k(eps)=%d <= budget %lld",
              p, viol.size(), bound_viol, worst_ratio, d, slope, -(p - 0.5), reach ? *reach : -1,
              static_cast<long long>(budget));
  }
  return {ok, os.str()};
}

// 7. Residual bound at the iteration budget with corollary tolerances vs ε.
Outcome criterion_7() {
  bool ok = true;
  std::ostringstream os;
  double worst = 0.0;
  for (int p : {2, 3}) {
    for (double d : {0.5, 1.0, 4.0}) {
      const double lp = 2.0, sigma = 3.0, eps = 1e-6;
      const double t = iteration_budget_real(eps, lp, sigma, d, p);
      const double bnd = theoretical_residual_bound(t, kappa_defaults(lp, d, p), eps, d, lp, sigma, p);
      worst = std::max(worst, bnd / eps);
      ok = ok && bnd <= eps * (1.0 + kCorollaryRelTol);
    }
    const double t = iteration_budget_real(1e-6, 2.0, 3.0, 1.0, p);
    const double bnd = theoretical_residual_bound(t, kappa_defaults(2.0, 1.0, p), 1e-6, 1.0, 2.0, 3.0, p);
    os << fmt("p=%d: bound(T)/eps = %.6f; ", p, bnd / 1e-6);
  }
  os << fmt("max over cases %.6f (required <= 1+1e-9). The i=1 term alone equals 2(p+1)eps.", worst);
  return {ok, os.str()};
}

// 8. Condition pass rate for lemma-sized batches.
Outcome criterion_8() {
  const Problem prob = make_logistic(20, 5000, 1e-3, 2);
  const Vector x0 = Vector::Zero(20);
  const LipschitzProfile prof = prob.lipschitz_profile(x0, 2.0);
  const double delta = 0.1, eps = 0.5;
  const InexactnessBudget bud = corollary_budget(eps, prof.L[3], 2.0, 3);
  std::mt19937_64 rng(108);
  bool ok = true;
  std::ostringstream os;
  for (SamplingMode mode : {SamplingMode::kOffline, SamplingMode::kOnline}) {
    const BatchPlan plan = make_batch_plan(prob, bud, 3, delta, mode, prof);
    int pass[3] = {0, 0, 0};
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const Vector x = random_in_ball(20, 1.0, rng);
      const DerivativeBundle b = sample_bundle(prob, x, plan, rng);
      const ConditionReport rep = verify_condition(prob, b, bud, 16, 1000 + t);
      for (int i = 0; i < 3; ++i) pass[i] += rep.pass[static_cast<std::size_t>(i)];
    }
    os << (mode == SamplingMode::kOffline ? "offline" : " | online") << fmt(" n=(%lld,%lld,%lld) pass=(%.3f,%.3f,%.3f)",
        static_cast<long long>(plan.n[0].value_or(-1)), static_cast<long long>(plan.n[1].value_or(-1)),
        static_cast<long long>(plan.n[2].value_or(-1)), pass[0] / 200.0, pass[1] / 200.0, pass[2] / 200.0);
    bool clamped = false;
    for (bool c : plan.clamped) clamped = clamped || c;
    if (clamped) os << " (clamped)";
    for (int i = 0; i < 3; ++i) ok = ok && pass[i] >= kPassRate * trials;
  }
  return {ok, os.str()};
}

// 9. Batch-size exponents per iteration and end-to-end sweep exponents.
Outcome criterion_9() {
  std::ostringstream os;
  bool ok = true;
  {
    const Problem prob = make_logistic(10, 2000, 0.0, 11, 2.0, 8.0);
    const LipschitzProfile prof = prob.lipschitz_profile(Vector::Zero(10), 10.0);
    const double expected[3] = {2.0, 4.0 / 3.0, 2.0 / 3.0};
    auto plan_for = [&](double eps) {
      return make_batch_plan(prob, corollary_budget(eps, prof.L[3], 40.0, 3), 3, 0.1, SamplingMode::kOnline, prof);
    };
    const BatchPlan a = plan_for(1e-3), b = plan_for(1e-4);
    os << "plan exponents per decade:";
    for (int i = 0; i < 3; ++i) {
      const double na = static_cast<double>(*a.n[static_cast<std::size_t>(i)]);
      const double nb = static_cast<double>(*b.n[static_cast<std::size_t>(i)]);
      // Ceilings move each size by < 1: the exponent may drift by log10((n+1)/n) on each end.
      const double slack = std::log10((na + 1.0) / na) + std::log10((nb + 1.0) / nb) + 1e-12;
      const double q = std::log10(nb / na);
      os << fmt(" n%d %.4f (theory %.4f)", i + 1, q, expected[i]);
      ok = ok && std::abs(q - expected[i]) <= slack;
    }
  }
  bench::ExperimentConfig cfg;
  cfg.problem.type = "logistic";
  cfg.problem.n = 10;
  cfg.problem.m = 2000;
  cfg.problem.mu = 0.0;
  cfg.problem.seed = 11;
  cfg.problem.planted_scale = 8.0;
  cfg.method = bench::Method::kStm;
  cfg.run.p = 3;
  cfg.run.mode = RunMode::kStochastic;
  cfg.run.kappa_policy = KappaPolicy::kCorollary;
  cfg.run.sampling = SamplingMode::kOnline;
  cfg.run.delta = 0.1;
  cfg.run.max_iter = 5000;
  cfg.eps = {1e-2, 3e-3, 1e-3, 3e-4};
  cfg.seeds = {0, 1, 2};
  const bench::ComplexitySummary s = bench::complexity_sweep(cfg, 1, false);
  os << fmt(" | sweep q_iter=%.3f [0.15,0.5] q_grad=%.3f [1.9,2.8] q_hess=%.3f [1.3,2.1] (third %.3f), reached %s",
            s.q_iter, s.q_grad, s.q_hess, s.q_third, s.all_reached ? "all" : "not all");
  const bool sweep_ok = s.all_reached && s.q_iter >= 0.15 && s.q_iter <= 0.5 && s.q_grad >= 1.9 && s.q_grad <= 2.8 &&
                        s.q_hess >= 1.3 && s.q_hess <= 2.1;
  if (s.clamped) {
    os << " (clamped: exponent checks report-only)";
  } else {
    ok = ok && sweep_ok;
  }
  return {ok, os.str()};
}

double frobenius3(const SymTensor3& t) {
  double ss = 0.0;
  const Eigen::Index n = t.dim();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) ss += t.at(i, j, k) * t.at(i, j, k);
  return std::sqrt(ss);
}

// 10. Mini-batch estimator error ∝ n^{-1/2}. Gated on the RMS error in the
// Euclidean/Frobenius norm; operator-norm slopes are reported alongside.
Outcome criterion_10() {
  const Problem prob = make_logistic(20, 5000, 1e-3, 3);
  std::mt19937_64 rng(110);
  const Vector x = random_in_ball(20, 1.0, rng);
  const Vector g = prob.gradient(x);
  const Matrix h = prob.hessian(x);
  const SymTensor3 t = prob.third(x).to_dense();
  const std::vector<std::int64_t> sizes{4, 16, 64, 256};
  const int draws = 200;
  bool ok = true;
  std::ostringstream os;
  for (SamplingMode mode : {SamplingMode::kOnline, SamplingMode::kOffline}) {
    std::vector<double> lx, ly[3], lop[2];
    for (std::int64_t n : sizes) {
      double ss[3] = {0, 0, 0}, so[2] = {0, 0};
      for (int d = 0; d < draws; ++d) {
        const BatchPlan plan = uniform_batch_plan(3, n, mode);
        const DerivativeBundle b = sample_bundle(prob, x, plan, rng);
        const Matrix dh = b.b - h;
        const SymTensor3 dt = b.t->to_dense() - t;
        ss[0] += (b.g - g).squaredNorm();
        ss[1] += dh.squaredNorm();
        ss[2] += std::pow(frobenius3(dt), 2);
        so[0] += std::pow(opnorm_mat(dh), 2);
        so[1] += std::pow(t3_norm_estimate(dt, 8, 31), 2);
      }
      lx.push_back(std::log(static_cast<double>(n)));
      for (int i = 0; i < 3; ++i) ly[i].push_back(0.5 * std::log(ss[i] / draws));
      for (int i = 0; i < 2; ++i) lop[i].push_back(0.5 * std::log(so[i] / draws));
    }
    os << (mode == SamplingMode::kOnline ? "online" : " | offline") << " slopes";
    for (int i = 0; i < 3; ++i) {
      const double sl = oracle::ls_slope(lx, ly[i]);
      os << fmt(" G%d %.3f", i + 1, sl);
      ok = ok && std::abs(sl + 0.5) <= kSlopeTol;
    }
    os << fmt(" (operator norm: G2 %.3f G3 %.3f)", oracle::ls_slope(lx, lop[0]), oracle::ls_slope(lx, lop[1]));
  }
  os << "; RMS error vs n in {4,16,64,256}, 200 draws each";
  return {ok, os.str()};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<const char*, std::function<Outcome()>>> list{
      {"majorization", criterion_1},        {"model convexity", criterion_2},
      {"taylor residual bounds", criterion_3}, {"relative smoothness", criterion_4},
      {"subsolvers", criterion_5},          {"deterministic rate", criterion_6},
      {"corollary identity", criterion_7},  {"condition pass rate", criterion_8},
      {"batch exponents", criterion_9},     {"estimator statistics", criterion_10},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    const auto& [name, fn] = criteria()[static_cast<std::size_t>(i - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", i, name, o.pass ? "PASS" : "FAIL", sec, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
