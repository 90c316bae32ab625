#include "spacc/metrics.hpp"

#include <cmath>
#include <unordered_map>

namespace spacc {

namespace {

std::vector<int> factorize(const std::vector<int>& labels) {
  std::unordered_map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

long long pairs2(long long x) { return x * (x - 1) / 2; }

struct PairSums {
  long long a = 0;      // sum over cells of C(n_gh, 2)
  long long rows = 0;   // sum over rows of C(n_g., 2)
  long long cols = 0;   // sum over cols of C(n_.h, 2)
  long long total = 0;  // C(p, 2)
};

PairSums pair_sums(const ContingencyTable& t) {
  if (t.total < 2) throw validation_error("metrics: need p >= 2 items");
  PairSums s;
  for (Eigen::Index g = 0; g < t.counts.rows(); ++g)
    for (Eigen::Index h = 0; h < t.counts.cols(); ++h)
      s.a += pairs2(t.counts(g, h));
  for (long long r : t.row_totals) s.rows += pairs2(r);
  for (long long c : t.col_totals) s.cols += pairs2(c);
  s.total = pairs2(t.total);
  return s;
}

}  // namespace

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& estimate) {
  if (truth.size() != estimate.size())
    throw validation_error("contingency: label vectors differ in length");
  if (truth.empty()) throw validation_error("contingency: empty labels");

  const std::vector<int> a = factorize(truth);
  const std::vector<int> b = factorize(estimate);
  int ga = 0;
  int gb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ga = std::max(ga, a[i] + 1);
    gb = std::max(gb, b[i] + 1);
  }

  ContingencyTable t;
  t.counts.setZero(ga, gb);
  for (std::size_t i = 0; i < a.size(); ++i) ++t.counts(a[i], b[i]);
  t.total = static_cast<long long>(a.size());
  t.row_totals.assign(static_cast<std::size_t>(ga), 0);
  t.col_totals.assign(static_cast<std::size_t>(gb), 0);
  for (int g = 0; g < ga; ++g)
    for (int h = 0; h < gb; ++h) {
      t.row_totals[static_cast<std::size_t>(g)] += t.counts(g, h);
      t.col_totals[static_cast<std::size_t>(h)] += t.counts(g, h);
    }
  return t;
}

ContingencyTable contingency(const RegionAssignment& truth,
                             const RegionAssignment& estimate) {
  return contingency(truth.labels, estimate.labels);
}

double rand_index(const ContingencyTable& table) {
  const PairSums s = pair_sums(table);
  // a + d = total + 2a - rows - cols
  return static_cast<double>(s.total + 2 * s.a - s.rows - s.cols) /
         static_cast<double>(s.total);
}

double jaccard(const ContingencyTable& table) {
  const PairSums s = pair_sums(table);
  const long long denom = s.rows + s.cols - s.a;  // a + b + c
  if (denom == 0) return 1.0;
  return static_cast<double>(s.a) / static_cast<double>(denom);
}

double adjusted_rand(const ContingencyTable& table) {
  const PairSums s = pair_sums(table);
  const long double expected = static_cast<long double>(s.rows) *
                               static_cast<long double>(s.cols) /
                               static_cast<long double>(s.total);
  const long double maximum = 0.5L * (s.rows + s.cols);
  if (maximum == expected) return 1.0;  // both partitions degenerate => identical
  return static_cast<double>((s.a - expected) / (maximum - expected));
}

double variation_of_information(const ContingencyTable& table,
                                double log_base) {
  if (table.total < 1) throw validation_error("metrics: empty table");
  // H(C) + H(Chat) - 2 I(C, Chat) rearranged cell by cell as
  //   sum_gh (n_gh / p) * (log n_g + log n_h - 2 log n_gh)
  // so that cells with n_gh = n_g = n_h contribute exactly zero and
  // identical partitions score 0 without rounding residue.
  const double p = static_cast<double>(table.total);
  double vi = 0.0;
  for (Eigen::Index g = 0; g < table.counts.rows(); ++g)
    for (Eigen::Index h = 0; h < table.counts.cols(); ++h) {
      const long long n_gh = table.counts(g, h);
      if (n_gh == 0) continue;
      const double log_g =
          std::log(static_cast<double>(table.row_totals[static_cast<std::size_t>(g)]));
      const double log_h =
          std::log(static_cast<double>(table.col_totals[static_cast<std::size_t>(h)]));
      vi += n_gh / p * (log_g + log_h - 2.0 * std::log(static_cast<double>(n_gh)));
    }
  if (vi < 0.0) vi = 0.0;  // guard against rounding at the metric's floor
  return vi / std::log(log_base);
}

}  // namespace spacc
