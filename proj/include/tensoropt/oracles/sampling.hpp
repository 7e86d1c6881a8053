#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/oracles/problem.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace tensoropt {

/// Online: i.i.d. draws from the uniform distribution over the components.
/// Offline: draws without replacement from the finite population.
enum class SamplingMode { kOnline, kOffline };

/// A multiset of component ids. Offline draws have distinct indices with
/// count 1; online draws are stored as (index, multiplicity) pairs.
struct StochasticDraw {
  SamplingMode mode = SamplingMode::kOffline;
  std::vector<Eigen::Index> indices;
  std::vector<std::int64_t> counts;
  std::int64_t size = 0;

  /// Averaging weights counts[j] / size.
  ComponentWeights weights() const {
    ComponentWeights cw;
    cw.indices = indices;
    cw.weights.reserve(counts.size());
    for (std::int64_t c : counts) cw.weights.push_back(static_cast<double>(c) / static_cast<double>(size));
    return cw;
  }
};

/// Full population with uniform weights.
inline ComponentWeights full_batch_weights(Eigen::Index m) {
  ComponentWeights cw;
  cw.indices.resize(static_cast<std::size_t>(m));
  std::iota(cw.indices.begin(), cw.indices.end(), Eigen::Index{0});
  cw.weights.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
  return cw;
}

namespace detail {

// Sequential conditional binomials: exact multinomial(size; 1/m, ..., 1/m).
inline std::vector<std::int64_t> uniform_multinomial(std::int64_t size, Eigen::Index m, std::mt19937_64& rng) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
  std::int64_t remaining = size;
  for (Eigen::Index j = 0; j < m && remaining > 0; ++j) {
    const auto left = static_cast<double>(m - j);
    if (j == m - 1) {
      counts[static_cast<std::size_t>(j)] = remaining;
      break;
    }
    std::binomial_distribution<std::int64_t> bin(remaining, 1.0 / left);
    const std::int64_t c = bin(rng);
    counts[static_cast<std::size_t>(j)] = c;
    remaining -= c;
  }
  return counts;
}

}  // namespace detail

/// Draws `batch_size` component ids according to `mode`.
///
/// Offline draws need batch_size <= m. Online batches up to 4m are drawn one
/// index at a time; larger ones through an exact multinomial count vector, so
/// the cost is O(min(batch_size, m)).
inline StochasticDraw draw(const Problem& prob, SamplingMode mode, std::int64_t batch_size, std::mt19937_64& rng) {
  const Eigen::Index m = prob.components();
  if (batch_size < 1) throw InvalidArgument("draw: batch size must be >= 1");
  StochasticDraw d;
  d.mode = mode;
  d.size = batch_size;
  if (mode == SamplingMode::kOffline) {
    if (batch_size > m) {
      throw InvalidArgument("draw: offline batch size " + std::to_string(batch_size) +
                            " exceeds population " + std::to_string(m));
    }
    if (batch_size == m) {
      d.indices.resize(static_cast<std::size_t>(m));
      std::iota(d.indices.begin(), d.indices.end(), Eigen::Index{0});
    } else {
      // Partial Fisher-Yates.
      std::vector<Eigen::Index> pool(static_cast<std::size_t>(m));
      std::iota(pool.begin(), pool.end(), Eigen::Index{0});
      for (std::int64_t i = 0; i < batch_size; ++i) {
        std::uniform_int_distribution<std::int64_t> pick(i, m - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      }
      d.indices.assign(pool.begin(), pool.begin() + batch_size);
    }
    d.counts.assign(d.indices.size(), 1);
    return d;
  }

  std::vector<std::int64_t> counts;
  if (batch_size <= 4 * static_cast<std::int64_t>(m)) {
    counts.assign(static_cast<std::size_t>(m), 0);
    std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
    for (std::int64_t i = 0; i < batch_size; ++i) ++counts[static_cast<std::size_t>(pick(rng))];
  } else {
    counts = detail::uniform_multinomial(batch_size, m, rng);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      d.indices.push_back(j);
      d.counts.push_back(counts[static_cast<std::size_t>(j)]);
    }
  }
  return d;
}

}  // namespace tensoropt
