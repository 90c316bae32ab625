#include "spacc/core.hpp"

#include <cmath>
#include <sstream>

namespace spacc {

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << (ok ? "ok" : "fail");
  if (!shape_ok) out << "; bad shape (need n >= 1, p >= 2, matching mask/positions)";
  if (!sorted) out << "; positions not sorted at index " << first_unsorted;
  out << "; missing entries: " << missing_count;
  if (!fully_missing_columns.empty()) {
    out << "; fully missing columns:";
    for (Index c : fully_missing_columns) out << ' ' << c;
  }
  if (nonfinite_observed > 0)
    out << "; non-finite observed values: " << nonfinite_observed << " (first at "
        << nonfinite_row << ',' << nonfinite_col << ")";
  return out.str();
}

ValidationReport validate(const ProbeMatrix& m) {
  ValidationReport r;
  const Index n = m.values.rows();
  const Index p = m.values.cols();

  r.shape_ok = n >= 1 && p >= 2 && m.mask.rows() == n && m.mask.cols() == p &&
               static_cast<Index>(m.positions.size()) == p;

  if (r.shape_ok) {
    for (Index j = 0; j + 1 < p; ++j) {
      if (m.positions[static_cast<std::size_t>(j + 1)] <
          m.positions[static_cast<std::size_t>(j)]) {
        r.sorted = false;
        r.first_unsorted = j;
        break;
      }
    }
    for (Index j = 0; j < p; ++j) {
      Index observed = 0;
      for (Index i = 0; i < n; ++i) {
        if (!m.mask(i, j)) {
          ++r.missing_count;
          continue;
        }
        ++observed;
        if (!std::isfinite(m.values(i, j))) {
          if (r.nonfinite_observed == 0) {
            r.nonfinite_row = i;
            r.nonfinite_col = j;
          }
          ++r.nonfinite_observed;
        }
      }
      if (observed == 0) r.fully_missing_columns.push_back(j);
    }
  }

  r.ok = r.shape_ok && r.sorted && r.nonfinite_observed == 0 &&
         r.fully_missing_columns.empty();
  return r;
}

WeightChain compute_weights(const std::vector<std::int64_t>& positions,
                            double sigma, double zero_cut) {
  if (positions.size() < 2)
    throw validation_error("compute_weights: need at least 2 positions");
  if (sigma < 0.0) throw validation_error("compute_weights: sigma must be >= 0");
  if (zero_cut < 0.0 || zero_cut >= 1.0)
    throw validation_error("compute_weights: zero_cut must be in [0, 1)");

  const Index p = static_cast<Index>(positions.size());
  WeightChain chain;
  chain.sigma = sigma;
  chain.zero_cut = zero_cut;
  chain.weights.resize(p - 1);
  for (Index i = 0; i + 1 < p; ++i) {
    const std::int64_t gap = positions[static_cast<std::size_t>(i + 1)] -
                             positions[static_cast<std::size_t>(i)];
    if (gap < 0)
      throw validation_error("compute_weights: positions not sorted at index " +
                             std::to_string(i));
    const double w = std::exp(-sigma * static_cast<double>(gap));
    chain.weights[i] = w >= zero_cut ? w : 0.0;
  }
  return chain;
}

std::vector<SubproblemSpan> split_subproblems(const WeightChain& chain) {
  const Index p = chain.weights.size() + 1;
  std::vector<SubproblemSpan> spans;
  Index start = 0;
  for (Index i = 0; i < chain.weights.size(); ++i) {
    if (chain.weights[i] == 0.0) {
      spans.push_back({start, i});
      start = i + 1;
    }
  }
  spans.push_back({start, p - 1});
  return spans;
}

}  // namespace spacc
