#include "spacc/solver.hpp"

#include <cmath>
#include <string>

#include "spacc/core.hpp"
#include "spacc/parallel.hpp"

namespace spacc {

Vector prox_group_l2(const Vector& v, double t) {
  if (t < 0.0) throw validation_error("prox_group_l2: t must be >= 0");
  const double nrm = v.norm();
  if (nrm <= t) return Vector::Zero(v.size());
  if (t == 0.0) return v;
  return (1.0 - t / nrm) * v;
}

double objective(const Matrix& X, const Matrix& U, const WeightChain& weights,
                 double gamma) {
  if (X.rows() != U.rows() || X.cols() != U.cols())
    throw validation_error("objective: X and U shapes differ");
  if (weights.weights.size() != X.cols() - 1)
    throw validation_error("objective: weight length must be p-1");
  double penalty = 0.0;
  for (Index i = 0; i + 1 < X.cols(); ++i)
    penalty += weights.weights[i] * (U.col(i) - U.col(i + 1)).norm();
  return 0.5 * (X - U).squaredNorm() + gamma * penalty;
}

namespace {

void check_solver_input(const Matrix& X, const WeightChain& weights,
                        const SolverConfig& cfg) {
  if (X.rows() < 1 || X.cols() < 1)
    throw validation_error("ama_solve: empty input matrix");
  if (weights.weights.size() != X.cols() - 1)
    throw validation_error("ama_solve: weight length must be p-1");
  if (!X.allFinite()) throw validation_error("ama_solve: non-finite input");
  if (cfg.gamma < 0.0 || cfg.nu <= 0.0 || cfg.tol <= 0.0 || cfg.max_iter < 1)
    throw validation_error("ama_solve: bad config (need gamma >= 0, nu > 0, tol > 0, max_iter >= 1)");
}

}  // namespace

SolverState ama_solve(const Matrix& X, const WeightChain& weights,
                      const SolverConfig& cfg, const SolverState* warm) {
  check_solver_input(X, weights, cfg);
  const Index n = X.rows();
  const Index p = X.cols();

  SolverState st;
  if (p == 1) {  // single-probe span: no links, loss alone decides
    st.U = X;
    st.V.resize(n, 0);
    st.Lambda.resize(n, 0);
    st.iterations = 0;
    st.converged = true;
    return st;
  }

  const Index m = p - 1;
  const double nu = cfg.nu;
  const Vector thresh = (cfg.gamma / nu) * weights.weights;  // prox levels

  // The three updates reduce to a recurrence in Lambda alone:
  //   U^{k}   = X + adj(Lambda^{k-1})
  //   G^{k}   = D U^{k} - Lambda^{k-1}/nu = DX + (L - I/nu) Lambda^{k-1}
  //   V^{k}   = prox(G^{k})
  //   Lambda^{k} = Lambda^{k-1} + nu (V^k - D U^k) = nu (V^k - G^k)
  // with D the column-difference map, adj its adjoint and L = D o adj the
  // second-difference operator. U is materialized only when the stopping
  // rule is evaluated.
  const Matrix DX = X.leftCols(m) - X.rightCols(m);
  Matrix Lam;
  if (warm && warm->U.rows() == n && warm->U.cols() == p &&
      warm->Lambda.cols() == m) {
    Lam = warm->Lambda;
  } else {
    Lam = Matrix::Zero(n, m);
  }
  Matrix Lam_prev(n, m);
  Matrix G(n, m);
  Matrix V(n, m);
  Matrix U(n, p);
  Vector norms(m);

  constexpr int check_every = 8;

  for (int k = 1; k <= cfg.max_iter; ++k) {
    G = DX + (2.0 - 1.0 / nu) * Lam;
    if (m > 1) {
      G.rightCols(m - 1) -= Lam.leftCols(m - 1);
      G.leftCols(m - 1) -= Lam.rightCols(m - 1);
    }

    norms = G.colwise().norm();
    for (Index i = 0; i < m; ++i) {
      const double nrm = norms[i];
      if (nrm <= thresh[i]) {
        V.col(i).setZero();
      } else if (thresh[i] == 0.0) {
        V.col(i) = G.col(i);
      } else {
        V.col(i) = (1.0 - thresh[i] / nrm) * G.col(i);
      }
    }

    Lam_prev.swap(Lam);
    Lam = nu * (V - G);

    if (k == 1 || k % check_every == 0 || k == cfg.max_iter) {
      // U of this iteration (built from the pre-update dual)
      U = X;
      U.leftCols(m) += Lam_prev;
      U.rightCols(m) -= Lam_prev;
      const double u_norm = U.norm();

      // V^k - D U^k = (Lambda^k - Lambda^{k-1}) / nu
      double feas = 0.0;
      for (Index i = 0; i < m; ++i)
        feas = std::max(feas, (Lam.col(i) - Lam_prev.col(i)).norm() / nu);

      // change of U across this iteration: adj(Lambda^k - Lambda^{k-1})
      double du_sq = (Lam.col(0) - Lam_prev.col(0)).squaredNorm() +
                     (Lam.col(m - 1) - Lam_prev.col(m - 1)).squaredNorm();
      for (Index j = 1; j < m; ++j)
        du_sq += (Lam.col(j) - Lam_prev.col(j) - Lam.col(j - 1) +
                  Lam_prev.col(j - 1))
                     .squaredNorm();
      const double err = std::max(std::sqrt(du_sq) / (1.0 + u_norm),
                                  feas / (1.0 + u_norm));

      st.iterations = k;
      st.final_residual = err;
      if (err <= cfg.tol || k == cfg.max_iter) {
        st.converged = err <= cfg.tol;
        st.U = std::move(U);
        st.V = std::move(V);
        st.Lambda = std::move(Lam);
        return st;
      }
    }
  }
  return st;  // unreachable; the max_iter branch above returns
}

SolverState solve_decomposed(const Matrix& X, const WeightChain& weights,
                             const SolverConfig& cfg, int worker_count,
                             const SolverState* warm) {
  check_solver_input(X, weights, cfg);
  const Index n = X.rows();
  const Index p = X.cols();
  const std::vector<SubproblemSpan> spans = split_subproblems(weights);

  SolverState st;
  st.U.resize(n, p);
  st.V.resize(n, p - 1);
  st.Lambda = Matrix::Zero(n, p - 1);

  std::vector<int> iters(spans.size(), 0);
  std::vector<double> residuals(spans.size(), 0.0);
  std::vector<char> ok(spans.size(), 1);

  parallel_for(static_cast<Index>(spans.size()), worker_count, [&](Index s) {
    const SubproblemSpan span = spans[static_cast<std::size_t>(s)];
    const Index len = span.size();
    try {
      WeightChain sub;
      sub.sigma = weights.sigma;
      sub.zero_cut = weights.zero_cut;
      sub.weights = len > 1 ? weights.weights.segment(span.start, len - 1)
                            : Vector(0);

      SolverState warm_sub;
      const SolverState* warm_ptr = nullptr;
      if (warm && warm->U.rows() == n && warm->U.cols() == p) {
        warm_sub.U = warm->U.middleCols(span.start, len);
        if (len > 1) {
          warm_sub.V = warm->V.middleCols(span.start, len - 1);
          warm_sub.Lambda = warm->Lambda.middleCols(span.start, len - 1);
        } else {
          warm_sub.V.resize(n, 0);
          warm_sub.Lambda.resize(n, 0);
        }
        warm_ptr = &warm_sub;
      }

      SolverState sub_state =
          ama_solve(X.middleCols(span.start, len), sub, cfg, warm_ptr);

      st.U.middleCols(span.start, len) = sub_state.U;
      if (len > 1) {
        st.V.middleCols(span.start, len - 1) = sub_state.V;
        st.Lambda.middleCols(span.start, len - 1) = sub_state.Lambda;
      }
      iters[static_cast<std::size_t>(s)] = sub_state.iterations;
      residuals[static_cast<std::size_t>(s)] = sub_state.final_residual;
      ok[static_cast<std::size_t>(s)] = sub_state.converged ? 1 : 0;
    } catch (const std::exception& e) {
      const std::string ctx = "span " + std::to_string(s) + " [" +
                              std::to_string(span.start) + ".." +
                              std::to_string(span.end) + "]: " + e.what();
      if (dynamic_cast<const validation_error*>(&e)) throw validation_error(ctx);
      if (dynamic_cast<const io_error*>(&e)) throw io_error(ctx);
      throw convergence_error(ctx);
    }
  });

  // Severed links carry the raw difference and a zero dual; the penalty
  // never touches them.
  for (std::size_t s = 0; s + 1 < spans.size(); ++s) {
    const Index i = spans[s].end;
    st.V.col(i) = st.U.col(i) - st.U.col(i + 1);
    st.Lambda.col(i).setZero();
  }

  st.converged = true;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    st.iterations = std::max(st.iterations, iters[s]);
    st.final_residual = std::max(st.final_residual, residuals[s]);
    if (!ok[s]) st.converged = false;
  }
  return st;
}

RegionAssignment extract_regions(const Matrix& V, double threshold,
                                 FusionRule rule) {
  if (threshold < 0.0)
    throw validation_error("extract_regions: threshold must be >= 0");
  const Index p = V.cols() + 1;
  RegionAssignment out;
  out.labels.resize(static_cast<std::size_t>(p));
  int label = 1;
  out.labels[0] = label;
  for (Index i = 0; i + 1 < p; ++i) {
    const double level = rule == FusionRule::MaxAbs
                             ? V.col(i).cwiseAbs().maxCoeff()
                             : V.col(i).norm();
    const bool fused = level == 0.0 || level < threshold;
    if (!fused) ++label;
    out.labels[static_cast<std::size_t>(i + 1)] = label;
  }
  return out;
}

}  // namespace spacc
