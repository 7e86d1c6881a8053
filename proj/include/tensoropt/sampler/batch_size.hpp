#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/model/bundle.hpp"
#include "tensoropt/oracles/problem.hpp"
#include "tensoropt/oracles/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tensoropt {

namespace detail {

inline void check_batch_args(int i, int p, double kappa, double eps, double delta) {
  if (p < 1 || i < 1 || i > p) throw InvalidArgument("batch size: need 1 <= i <= p");
  if (!(kappa >= 0.0)) throw InvalidArgument("batch size: kappa must be >= 0");
  if (!(eps > 0.0)) throw InvalidArgument("batch size: eps must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("batch size: delta must be in (0, 1]");
}

/// i·n·ln k₀ + ln(2/δ) with k₀ = 2i / ln(3/2).
inline double hoeffding_log_term(int i, Eigen::Index dim, double delta) {
  const double k0 = 2.0 * i / std::log(1.5);
  return i * static_cast<double>(dim) * std::log(k0) + std::log(2.0 / delta);
}

inline double accuracy_target(int i, int p, double kappa, double eps) {
  return kappa * std::pow(eps, static_cast<double>(p - i + 1) / p);
}

}  // namespace detail

/// Range of the order-i derivative samples: σ_i = M_i + L_{i-1} (online).
inline double online_range(const LipschitzProfile& prof, int i) { return prof.M.at(i) + prof.L.at(i - 1); }

/// Range for finite-population sampling: σ_i = 2 L_{i-1} (offline).
inline double offline_range(const LipschitzProfile& prof, int i) { return 2.0 * prof.L.at(i - 1); }

/// Online mini-batch size from the tensor Hoeffding bound:
///   n_i = ceil((2σ²/t²)(i·n·ln k₀ + ln(2/δ))),  t = κ_i ε^{(p-i+1)/p}.
/// κ_i = 0 means exact derivatives are required; returns nullopt.
inline std::optional<std::int64_t> batch_size_online(int i, int p, double kappa, double eps, double delta,
                                                     Eigen::Index dim, double sigma_i) {
  detail::check_batch_args(i, p, kappa, eps, delta);
  if (kappa == 0.0) return std::nullopt;
  if (!(sigma_i >= 0.0)) throw InvalidArgument("batch_size_online: sigma_i must be >= 0");
  const double t = detail::accuracy_target(i, p, kappa, eps);
  const double n = 2.0 * sigma_i * sigma_i / (t * t) * detail::hoeffding_log_term(i, dim, delta);
  if (!(n < 9e18)) throw CapacityError("batch_size_online: batch size overflows");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n)));
}

inline std::optional<std::int64_t> batch_size_online(int i, int p, double kappa, double eps, double delta,
                                                     Eigen::Index dim, const LipschitzProfile& prof) {
  return batch_size_online(i, p, kappa, eps, delta, dim, online_range(prof, i));
}

/// Left side of the Hoeffding–Serfling sizing inequality,
///   t² n² / (2σ² (n+1)(1 − n/m)),  infinite at n = m.
inline double serfling_lhs(std::int64_t n, std::int64_t m, double t, double sigma_i) {
  if (n >= m) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  const double frac = 1.0 - nn / static_cast<double>(m);
  return t * t * nn * nn / (2.0 * sigma_i * sigma_i * (nn + 1.0) * frac);
}

/// Smallest n_i <= m with serfling_lhs(n_i) >= i·n·ln k₀ + ln(2/δ).
inline std::optional<std::int64_t> batch_size_offline(int i, int p, double kappa, double eps, double delta,
                                                      std::int64_t m, Eigen::Index dim, double sigma_i) {
  detail::check_batch_args(i, p, kappa, eps, delta);
  if (m < 1) throw InvalidArgument("batch_size_offline: m must be >= 1");
  if (kappa == 0.0) return std::nullopt;
  if (!(sigma_i >= 0.0)) throw InvalidArgument("batch_size_offline: sigma_i must be >= 0");
  if (sigma_i == 0.0) return 1;
  const double t = detail::accuracy_target(i, p, kappa, eps);
  const double rhs = detail::hoeffding_log_term(i, dim, delta);
  std::int64_t lo = 1, hi = m;  // serfling_lhs(hi) >= rhs always
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (serfling_lhs(mid, m, t, sigma_i) >= rhs) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

inline std::optional<std::int64_t> batch_size_offline(int i, int p, double kappa, double eps, double delta,
                                                      std::int64_t m, Eigen::Index dim, const LipschitzProfile& prof) {
  return batch_size_offline(i, p, kappa, eps, delta, m, dim, offline_range(prof, i));
}

/// Per-order batch sizes; nullopt entries mean exact (full) derivatives.
struct BatchPlan {
  std::vector<std::optional<std::int64_t>> n;  // n[i-1] = n_i
  double delta = 0.1;
  SamplingMode mode = SamplingMode::kOffline;
  std::vector<bool> clamped;  // offline n_i reached m

  int order() const { return static_cast<int>(n.size()); }

  void validate(std::int64_t m) const {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("BatchPlan: delta must be in (0, 1]");
    for (const auto& ni : n) {
      if (!ni) continue;
      if (*ni < 1) throw InvalidArgument("BatchPlan: batch sizes must be >= 1");
      if (mode == SamplingMode::kOffline && *ni > m) {
        throw InvalidArgument("BatchPlan: offline batch size " + std::to_string(*ni) + " exceeds m");
      }
    }
  }
};

/// Lemma-sized plan for all orders, splitting δ evenly (δ/p per order).
inline BatchPlan make_batch_plan(const Problem& prob, const InexactnessBudget& budget, int p, double delta,
                                 SamplingMode mode, const LipschitzProfile& prof) {
  budget.validate(p);
  BatchPlan plan;
  plan.delta = delta;
  plan.mode = mode;
  const double d_i = delta / p;
  const std::int64_t m = prob.components();
  for (int i = 1; i <= p; ++i) {
    std::optional<std::int64_t> ni;
    if (mode == SamplingMode::kOnline) {
      ni = batch_size_online(i, p, budget.kappa_at(i), budget.eps, d_i, prob.dim(), prof);
    } else {
      ni = batch_size_offline(i, p, budget.kappa_at(i), budget.eps, d_i, m, prob.dim(), prof);
    }
    plan.clamped.push_back(mode == SamplingMode::kOffline && ni && *ni == m && m > 1);
    plan.n.push_back(ni);
  }
  return plan;
}

/// Every order sampled with the same batch size.
inline BatchPlan uniform_batch_plan(int p, std::int64_t size, SamplingMode mode) {
  BatchPlan plan;
  plan.mode = mode;
  plan.n.assign(static_cast<std::size_t>(p), size);
  plan.clamped.assign(static_cast<std::size_t>(p), false);
  return plan;
}

}  // namespace tensoropt
