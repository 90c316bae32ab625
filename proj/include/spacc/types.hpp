#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spacc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Input violates a documented precondition (bad shapes, unsorted
/// positions, fully missing columns, ...).
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative routine could not reach its target accuracy.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system or file format problem.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subjects-by-probes data matrix for one chromosome. Rows are subjects,
/// columns are probes sorted by genomic position. `mask` is true where an
/// entry is observed; values at unobserved entries are unspecified (the
/// TSV reader stores NaN there).
struct ProbeMatrix {
  Matrix values;                        // n x p
  Mask mask;                            // n x p, true = observed
  std::vector<std::int64_t> positions;  // length p, basepairs, non-decreasing
  std::string chromosome;

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }
  bool fully_observed() const { return mask.size() > 0 && mask.all(); }

  /// Fully observed matrix from raw values.
  static ProbeMatrix dense(Matrix values, std::vector<std::int64_t> positions,
                           std::string chromosome = {}) {
    ProbeMatrix m;
    m.mask = Mask::Constant(values.rows(), values.cols(), true);
    m.values = std::move(values);
    m.positions = std::move(positions);
    m.chromosome = std::move(chromosome);
    return m;
  }
};

/// Nonnegative weights for the p-1 adjacent probe pairs. Each weight is
/// either exactly zero or at least `zero_cut`; exact zeros sever the chain
/// into independent subproblems.
struct WeightChain {
  Vector weights;        // length p-1
  double sigma = 0.0;    // decay rate per basepair
  double zero_cut = 0.0; // hard-threshold level
};

/// Inclusive range [start, end] of probe indices forming one independent
/// subproblem.
struct SubproblemSpan {
  Index start = 0;
  Index end = 0;
  Index size() const { return end - start + 1; }
  bool operator==(const SubproblemSpan&) const = default;
};

/// Region label per probe. Labels produced by this library start at 1,
/// are non-decreasing along the chain and change only at fusion breaks.
struct RegionAssignment {
  std::vector<int> labels;

  Index p() const { return static_cast<Index>(labels.size()); }
  int region_count() const {
    return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
  }
  bool operator==(const RegionAssignment&) const = default;
};

}  // namespace spacc
