#pragma once

#include "spacc/solver.hpp"
#include "spacc/types.hpp"

namespace spacc {

struct MmConfig {
  double outer_tol = 1e-6;  // relative change of the observed-entry objective
  int max_outer = 50;
  SolverConfig inner;        // budget for each inner chain solve
  int inner_iter_budget = 0; // total inner iterations across outer steps
                             // (0 = unlimited); cross-validation cells use
                             // this to bound their cost
};

struct MmResult {
  SolverState state;
  /// Observed-entry objective at the start and after every outer step.
  /// Non-increasing by construction.
  std::vector<double> objective_history;
  int outer_iterations = 0;
  bool converged = false;
};

/// T with observed entries copied from X and missing entries from U_current.
Matrix complete(const ProbeMatrix& X, const Matrix& U_current);

/// Loss over observed entries only, plus the fusion penalty.
double missing_objective(const ProbeMatrix& X, const Matrix& U,
                         const WeightChain& weights, double gamma);

/// Surrogate value g(U | U_anchor): full Frobenius loss against the matrix
/// completed with U_anchor, plus the penalty. Majorizes missing_objective
/// and touches it at U = U_anchor.
double majorizer(const ProbeMatrix& X, const Matrix& U, const Matrix& U_anchor,
                 const WeightChain& weights, double gamma);

/// Missing entries filled with their column's observed mean; columns with
/// no observed entries fall back to the subject's row mean.
Matrix initial_completion(const ProbeMatrix& X);

/// Fits the observed-entry problem by majorization-minimization: alternate
/// complete() with a full chain solve on the completed matrix, warm
/// starting each inner solve from the previous state. The objective
/// sequence is kept non-increasing by tightening the inner tolerance
/// whenever an inexact inner solve would let it rise. Requires at least
/// one observed entry per column. Missing entries of the returned U are
/// the model-based imputations.
MmResult mm_solve(const ProbeMatrix& X, const WeightChain& weights,
                  double gamma, const MmConfig& cfg, int worker_count = 1);

}  // namespace spacc
