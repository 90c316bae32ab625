#pragma once

// Shared instance generators for the test suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "spacc/rng.hpp"
#include "spacc/types.hpp"

namespace gen {

inline spacc::Matrix random_matrix(spacc::Index n, spacc::Index p,
                                   spacc::Rng& rng, double scale = 1.0) {
  spacc::Matrix X(n, p);
  for (spacc::Index i = 0; i < n; ++i)
    for (spacc::Index j = 0; j < p; ++j) X(i, j) = scale * rng.normal();
  return X;
}

inline spacc::WeightChain random_weights(spacc::Index p, spacc::Rng& rng,
                                         double zero_prob = 0.0) {
  spacc::WeightChain w;
  w.weights.resize(p - 1);
  for (spacc::Index i = 0; i + 1 < p; ++i)
    w.weights[i] = rng.bernoulli(zero_prob) ? 0.0 : rng.uniform(0.2, 1.0);
  return w;
}

inline spacc::WeightChain unit_weights(spacc::Index p) {
  spacc::WeightChain w;
  w.weights = spacc::Vector::Ones(p - 1);
  return w;
}

inline spacc::Mask random_mask(spacc::Index n, spacc::Index p,
                               double missing_prob, spacc::Rng& rng) {
  // Keeps at least one observed entry per column.
  spacc::Mask mask(n, p);
  for (spacc::Index j = 0; j < p; ++j) {
    bool any = false;
    for (spacc::Index i = 0; i < n; ++i) {
      mask(i, j) = !rng.bernoulli(missing_prob);
      any = any || mask(i, j);
    }
    if (!any) mask(static_cast<spacc::Index>(rng.below(n)), j) = true;
  }
  return mask;
}

/// Piecewise-constant signal: per-subject level per region plus noise.
inline spacc::Matrix piecewise_matrix(spacc::Index n,
                                      const std::vector<spacc::Index>& lengths,
                                      double level_scale, double noise_sigma,
                                      spacc::Rng& rng) {
  spacc::Index p = 0;
  for (spacc::Index len : lengths) p += len;
  spacc::Matrix X(n, p);
  spacc::Index start = 0;
  for (spacc::Index len : lengths) {
    for (spacc::Index i = 0; i < n; ++i) {
      const double level = level_scale * rng.normal();
      for (spacc::Index j = start; j < start + len; ++j)
        X(i, j) = level + noise_sigma * rng.normal();
    }
    start += len;
  }
  return X;
}

inline std::vector<std::int64_t> even_positions(spacc::Index p,
                                                std::int64_t gap = 1000) {
  std::vector<std::int64_t> pos(static_cast<std::size_t>(p));
  for (spacc::Index j = 0; j < p; ++j)
    pos[static_cast<std::size_t>(j)] = 1 + j * gap;
  return pos;
}

/// Random partition of [0, p) into exactly k contiguous spans via distinct
/// uniform cut points.
inline std::vector<spacc::SubproblemSpan> random_contiguous_partition(
    spacc::Index p, int k, spacc::Rng& rng) {
  std::vector<spacc::Index> cuts;
  while (static_cast<int>(cuts.size()) < k - 1) {
    const spacc::Index c =
        1 + static_cast<spacc::Index>(rng.below(static_cast<std::uint64_t>(p - 1)));
    bool dup = false;
    for (spacc::Index x : cuts) dup = dup || x == c;
    if (!dup) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<spacc::SubproblemSpan> spans;
  spacc::Index start = 0;
  for (spacc::Index c : cuts) {
    spans.push_back({start, c - 1});
    start = c;
  }
  spans.push_back({start, p - 1});
  return spans;
}

}  // namespace gen
