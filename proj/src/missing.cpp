#include "spacc/missing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spacc {

namespace {

void check_shapes(const ProbeMatrix& X) {
  if (X.values.rows() < 1 || X.values.cols() < 1)
    throw validation_error("missing: empty input matrix");
  if (X.mask.rows() != X.values.rows() || X.mask.cols() != X.values.cols())
    throw validation_error("missing: mask shape differs from values");
}

double penalty_term(const Matrix& U, const WeightChain& weights) {
  double penalty = 0.0;
  for (Index i = 0; i + 1 < U.cols(); ++i)
    penalty += weights.weights[i] * (U.col(i) - U.col(i + 1)).norm();
  return penalty;
}

}  // namespace

Matrix complete(const ProbeMatrix& X, const Matrix& U_current) {
  check_shapes(X);
  if (U_current.rows() != X.values.rows() || U_current.cols() != X.values.cols())
    throw validation_error("complete: U shape differs from X");
  return X.mask.select(X.values, U_current);
}

double missing_objective(const ProbeMatrix& X, const Matrix& U,
                         const WeightChain& weights, double gamma) {
  check_shapes(X);
  const Matrix resid =
      X.mask.select(X.values - U, Matrix::Zero(X.n(), X.p()));
  return 0.5 * resid.squaredNorm() + gamma * penalty_term(U, weights);
}

double majorizer(const ProbeMatrix& X, const Matrix& U, const Matrix& U_anchor,
                 const WeightChain& weights, double gamma) {
  const Matrix T = complete(X, U_anchor);
  return 0.5 * (T - U).squaredNorm() + gamma * penalty_term(U, weights);
}

Matrix initial_completion(const ProbeMatrix& X) {
  check_shapes(X);
  const Index n = X.n();
  const Index p = X.p();

  Vector row_sum = Vector::Zero(n);
  Eigen::VectorXi row_cnt = Eigen::VectorXi::Zero(n);
  double global_sum = 0.0;
  Index global_cnt = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i)
      if (X.mask(i, j)) {
        row_sum[i] += X.values(i, j);
        ++row_cnt[i];
        global_sum += X.values(i, j);
        ++global_cnt;
      }
  const double global_mean = global_cnt > 0 ? global_sum / global_cnt : 0.0;

  Matrix T(n, p);
  for (Index j = 0; j < p; ++j) {
    double col_sum = 0.0;
    Index col_cnt = 0;
    for (Index i = 0; i < n; ++i)
      if (X.mask(i, j)) {
        col_sum += X.values(i, j);
        ++col_cnt;
      }
    const double col_mean = col_cnt > 0 ? col_sum / col_cnt : 0.0;
    for (Index i = 0; i < n; ++i) {
      if (X.mask(i, j))
        T(i, j) = X.values(i, j);
      else if (col_cnt > 0)
        T(i, j) = col_mean;
      else
        T(i, j) = row_cnt[i] > 0 ? row_sum[i] / row_cnt[i] : global_mean;
    }
  }
  return T;
}

MmResult mm_solve(const ProbeMatrix& X, const WeightChain& weights,
                  double gamma, const MmConfig& cfg, int worker_count) {
  check_shapes(X);
  if (weights.weights.size() != X.p() - 1)
    throw validation_error("mm_solve: weight length must be p-1");
  if (cfg.outer_tol <= 0.0 || cfg.max_outer < 1)
    throw validation_error("mm_solve: need outer_tol > 0 and max_outer >= 1");
  for (Index j = 0; j < X.p(); ++j) {
    bool any = false;
    for (Index i = 0; i < X.n(); ++i)
      if (X.mask(i, j)) {
        any = true;
        break;
      }
    if (!any)
      throw validation_error("mm_solve: column " + std::to_string(j) +
                             " has no observed entries");
  }
  for (Index j = 0; j < X.p(); ++j)
    for (Index i = 0; i < X.n(); ++i)
      if (X.mask(i, j) && !std::isfinite(X.values(i, j)))
        throw validation_error("mm_solve: non-finite observed value at " +
                               std::to_string(i) + "," + std::to_string(j));

  SolverConfig inner = cfg.inner;
  inner.gamma = gamma;

  MmResult res;

  if (X.fully_observed()) {
    res.state = solve_decomposed(X.values, weights, inner, worker_count);
    res.objective_history = {
        missing_objective(X, res.state.U, weights, gamma)};
    res.outer_iterations = 0;
    res.converged = res.state.converged;
    return res;
  }

  SolverState state;
  state.U = initial_completion(X);
  state.V = state.U.leftCols(X.p() - 1) - state.U.rightCols(X.p() - 1);
  state.Lambda = Matrix::Zero(X.n(), X.p() - 1);

  double f = missing_objective(X, state.U, weights, gamma);
  res.objective_history.push_back(f);

  int remaining = cfg.inner_iter_budget > 0 ? cfg.inner_iter_budget
                                            : std::numeric_limits<int>::max();
  double prev_rel = 1.0;
  for (int outer = 1; outer <= cfg.max_outer && remaining > 0; ++outer) {
    const Matrix T = complete(X, state.U);

    // Loose inner solves early, tightened as the outer loop closes in.
    inner.tol = std::clamp(0.1 * prev_rel, cfg.inner.tol, 1e-3);
    inner.max_iter = std::min(cfg.inner.max_iter, remaining);

    SolverState candidate = solve_decomposed(T, weights, inner, worker_count, &state);
    remaining -= candidate.iterations;
    double f_new = missing_objective(X, candidate.U, weights, gamma);

    // An inexact inner solve may overshoot; descend further on the same
    // surrogate until the objective does not rise.
    int retries = 0;
    while (f_new > f + 1e-11 && retries < 4 && remaining > 0) {
      inner.tol = std::max(inner.tol * 0.1, 1e-12);
      inner.max_iter = std::min(inner.max_iter * 2, remaining);
      candidate = solve_decomposed(T, weights, inner, worker_count, &candidate);
      remaining -= candidate.iterations;
      f_new = missing_objective(X, candidate.U, weights, gamma);
      ++retries;
    }
    if (f_new > f + 1e-11) {
      // No usable descent left at this accuracy; keep the previous iterate.
      res.converged = true;
      break;
    }

    state = std::move(candidate);
    res.objective_history.push_back(f_new);
    res.outer_iterations = outer;
    const double rel = std::abs(f - f_new) / (1.0 + std::abs(f));
    f = f_new;
    if (rel <= cfg.outer_tol) {
      res.converged = true;
      break;
    }
    prev_rel = rel;
  }

  res.state = std::move(state);
  if (!res.state.converged && res.converged) {
    // The outer loop stabilized but the last inner solve hit its cap; the
    // returned state is the best available, flag it honestly.
    res.converged = false;
  }
  return res;
}

}  // namespace spacc
