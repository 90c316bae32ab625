#pragma once

#include "spacc/types.hpp"

namespace spacc {

/// Diagnostic summary of a ProbeMatrix. Never throws; callers decide what
/// to do with a failing report.
struct ValidationReport {
  bool shape_ok = true;          // n >= 1, p >= 2, mask/positions sizes agree
  bool sorted = true;            // positions non-decreasing
  Index first_unsorted = -1;     // first i with positions[i+1] < positions[i]
  Index missing_count = 0;
  std::vector<Index> fully_missing_columns;
  Index nonfinite_observed = 0;  // observed entries that are not finite
  Index nonfinite_row = -1;      // coordinates of the first such entry
  Index nonfinite_col = -1;
  bool ok = false;

  std::string summary() const;
};

ValidationReport validate(const ProbeMatrix& m);

/// Spatial weights w[i] = exp(-sigma * (positions[i+1] - positions[i])),
/// hard-thresholded to exactly zero when below zero_cut. Positions must be
/// non-decreasing (ties give weight 1); sigma >= 0; zero_cut in [0, 1).
WeightChain compute_weights(const std::vector<std::int64_t>& positions,
                            double sigma, double zero_cut);

/// Maximal runs of probes connected by positive weights. T exactly-zero
/// weights yield T+1 spans that partition the chain in order.
std::vector<SubproblemSpan> split_subproblems(const WeightChain& chain);

}  // namespace spacc
