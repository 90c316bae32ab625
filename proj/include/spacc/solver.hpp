#pragma once

#include "spacc/types.hpp"

namespace spacc {

struct SolverConfig {
  double gamma = 0.0;  // regularization level, >= 0
  double nu = 0.25;    // dual step; the chain difference operator has
                       // squared spectral norm < 4, so 1/4 is always safe
  double tol = 1e-6;
  int max_iter = 20000;
};

struct SolverState {
  Matrix U;       // n x p centroid estimates
  Matrix V;       // n x (p-1) column differences of U
  Matrix Lambda;  // n x (p-1) dual variables
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
};

/// Group soft-thresholding: max(0, 1 - t/||v||) * v. Returns the zero
/// vector when ||v|| <= t and v unchanged when t = 0.
Vector prox_group_l2(const Vector& v, double t);

/// 0.5 * ||X - U||_F^2 + gamma * sum_i w_i ||U_col(i) - U_col(i+1)||_2.
double objective(const Matrix& X, const Matrix& U, const WeightChain& weights,
                 double gamma);

/// Fits the fused-penalty problem on a fully observed matrix by AMA:
/// closed-form U update from X and Lambda, group soft-threshold V update,
/// dual ascent on Lambda. Stops when
///   err = max( ||U - U_prev||_F / (1 + ||U_prev||_F),
///              max_i ||V_col(i) - (U_col(i) - U_col(i+1))|| / (1 + ||U||_F) )
/// drops to cfg.tol, or at max_iter (converged = false). Optionally warm
/// starts from a previous state with matching shapes.
SolverState ama_solve(const Matrix& X, const WeightChain& weights,
                      const SolverConfig& cfg,
                      const SolverState* warm = nullptr);

/// Splits the chain at exactly-zero weights, solves the subproblems
/// concurrently and stitches the states back together. V at a severed link
/// is the raw column difference of U (never penalized) and its dual is 0.
SolverState solve_decomposed(const Matrix& X, const WeightChain& weights,
                             const SolverConfig& cfg, int worker_count,
                             const SolverState* warm = nullptr);

enum class FusionRule {
  MaxAbs,      // fuse a link when every |V_ij| is below the threshold
  ColumnNorm,  // fuse when ||V_col(i)||_2 is below the threshold
};

/// Scans the chain left to right: adjacent probes fuse when the link's V
/// column is exactly zero or below the threshold under the given rule.
/// Labels start at 1 and increase with position.
RegionAssignment extract_regions(const Matrix& V, double threshold,
                                 FusionRule rule = FusionRule::MaxAbs);

}  // namespace spacc
