#pragma once

#include <numbers>

#include "spacc/types.hpp"

namespace spacc {

/// Cross-tabulation of two clusterings of the same p items:
/// counts(g, h) = |c_g intersect chat_h|.
struct ContingencyTable {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<long long> row_totals;
  std::vector<long long> col_totals;
  long long total = 0;
};

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& estimate);
ContingencyTable contingency(const RegionAssignment& truth,
                             const RegionAssignment& estimate);

/// Pair-counting scores. With a = pairs together in both clusterings,
/// b/c = together in exactly one, d = apart in both:
///   Rand    = (a + d) / (a + b + c + d)
///   Jaccard = a / (a + b + c), defined as 1 when a + b + c = 0
///   AdjRand = (a - E) / (max - E) with the usual expectation correction;
///             the 0/0 case arises only for identical partitions and is 1.
double rand_index(const ContingencyTable& table);
double adjusted_rand(const ContingencyTable& table);
double jaccard(const ContingencyTable& table);

/// Variation of information H(C) + H(Chat) - 2 I(C, Chat), by default in
/// nats; pass a base (e.g. 2) for other units.
double variation_of_information(const ContingencyTable& table,
                                double log_base = std::numbers::e);

}  // namespace spacc
