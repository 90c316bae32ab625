#include "spacc/cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spacc/core.hpp"
#include "spacc/parallel.hpp"
#include "spacc/rng.hpp"

namespace spacc {

FoldPlan make_folds(const Mask& mask, int k, std::uint64_t seed) {
  if (k < 2) throw validation_error("make_folds: need k >= 2");
  std::vector<EntryIndex> coords;
  for (Index i = 0; i < mask.rows(); ++i)
    for (Index j = 0; j < mask.cols(); ++j)
      if (mask(i, j)) coords.push_back({i, j});
  if (static_cast<int>(coords.size()) < k)
    throw validation_error("make_folds: fewer observed entries (" +
                           std::to_string(coords.size()) + ") than folds (" +
                           std::to_string(k) + ")");
  Rng rng(seed);
  rng.shuffle(coords);

  FoldPlan plan;
  plan.seed = seed;
  plan.folds.resize(static_cast<std::size_t>(k));
  for (std::size_t t = 0; t < coords.size(); ++t)
    plan.folds[t % static_cast<std::size_t>(k)].push_back(coords[t]);
  return plan;
}

double estimate_noise(const Matrix& values, const Mask& mask) {
  std::vector<double> diffs;
  for (Index i = 0; i < values.rows(); ++i)
    for (Index j = 0; j + 1 < values.cols(); ++j)
      if (mask(i, j) && mask(i, j + 1))
        diffs.push_back(std::abs(values(i, j + 1) - values(i, j)));
  if (diffs.size() < 2)
    throw validation_error("estimate_noise: need at least 2 observed adjacent pairs");
  std::sort(diffs.begin(), diffs.end());
  const std::size_t m = diffs.size();
  const double median = m % 2 == 1
                            ? diffs[m / 2]
                            : 0.5 * (diffs[m / 2 - 1] + diffs[m / 2]);
  return median / (0.6745 * std::numbers::sqrt2);
}

double fusion_threshold(double p, double n, double sigma_hat, double log_base) {
  return std::sqrt(std::log(p) / std::log(log_base) / n) * sigma_hat;
}

CvTable cross_validate(const ProbeMatrix& X, const WeightChain& weights,
                       const Vector& gamma_grid, const FoldPlan& plan,
                       const CvConfig& cfg) {
  if (gamma_grid.size() < 1)
    throw validation_error("cross_validate: empty gamma grid");
  for (Index t = 0; t + 1 < gamma_grid.size(); ++t)
    if (!(gamma_grid[t] < gamma_grid[t + 1]))
      throw validation_error("cross_validate: gamma grid must be strictly increasing");
  if (plan.folds.empty())
    throw validation_error("cross_validate: empty fold plan");

  const int K = static_cast<int>(plan.folds.size());
  const Index T = gamma_grid.size();

  CvTable table;
  table.gamma_grid = gamma_grid;
  table.mse = Matrix::Constant(K, T, std::numeric_limits<double>::quiet_NaN());
  table.valid = Mask::Constant(K, T, false);
  table.fused_share =
      Matrix::Constant(K, T, std::numeric_limits<double>::quiet_NaN());
  table.sigma_hat = estimate_noise(X.values, X.mask);

  parallel_for(static_cast<Index>(K) * T, cfg.worker_count, [&](Index cell) {
    const int k = static_cast<int>(cell / T);
    const Index t = cell % T;
    const auto& fold = plan.folds[static_cast<std::size_t>(k)];

    ProbeMatrix held = X;
    for (const EntryIndex& e : fold) held.mask(e.row, e.col) = false;

    try {
      const MmResult fit =
          mm_solve(held, weights, gamma_grid[t], cfg.mm, /*worker_count=*/1);
      double sse = 0.0;
      for (const EntryIndex& e : fold) {
        const double r = fit.state.U(e.row, e.col) - X.values(e.row, e.col);
        sse += r * r;
      }
      table.mse(k, t) = sse / static_cast<double>(fold.size());
      Index fused = 0;
      for (Index i = 0; i < fit.state.V.cols(); ++i)
        if (fit.state.V.col(i).cwiseAbs().maxCoeff() == 0.0) ++fused;
      table.fused_share(k, t) =
          fit.state.V.cols() > 0
              ? static_cast<double>(fused) / static_cast<double>(fit.state.V.cols())
              : 1.0;
      table.valid(k, t) = true;
    } catch (const std::exception&) {
      // cell stays invalid; the rest of the grid is unaffected
    }
  });

  return table;
}

std::pair<double, double> select_and_threshold(CvTable& table, Index n, Index p,
                                               double log_base) {
  const Index T = table.gamma_grid.size();
  double best_mean = std::numeric_limits<double>::infinity();
  Index best_t = -1;
  for (Index t = 0; t < T; ++t) {
    double sum = 0.0;
    int cnt = 0;
    for (Index k = 0; k < table.mse.rows(); ++k)
      if (table.valid(k, t)) {
        sum += table.mse(k, t);
        ++cnt;
      }
    if (cnt == 0) continue;
    const double mean = sum / cnt;
    if (mean <= best_mean) {  // ties resolve toward larger gamma
      best_mean = mean;
      best_t = t;
    }
  }
  if (best_t < 0)
    throw validation_error("select_and_threshold: every cell is invalid");

  table.gamma_star = table.gamma_grid[best_t];
  table.threshold = fusion_threshold(static_cast<double>(p),
                                     static_cast<double>(n), table.sigma_hat,
                                     log_base);
  return {table.gamma_star, table.threshold};
}

double full_fusion_gamma_bound(const Matrix& X, const WeightChain& weights) {
  const std::vector<SubproblemSpan> spans = split_subproblems(weights);
  double bound = 0.0;
  for (const SubproblemSpan& span : spans) {
    if (span.size() < 2) continue;
    const Vector span_mean =
        X.middleCols(span.start, span.size()).rowwise().mean();
    Vector cum = Vector::Zero(X.rows());
    for (Index j = span.start; j < span.end; ++j) {
      cum += span_mean - X.col(j);
      bound = std::max(bound, cum.norm() / weights.weights[j]);
    }
  }
  return bound;
}

namespace {

bool fully_fused(const SolverState& state, const WeightChain& weights) {
  const std::size_t span_count = split_subproblems(weights).size();
  return static_cast<std::size_t>(
             extract_regions(state.V, 0.0).region_count()) == span_count;
}

}  // namespace

Vector auto_gamma_grid(const ProbeMatrix& X, const WeightChain& weights,
                       int size, int worker_count) {
  if (size < 1) throw validation_error("auto_gamma_grid: size must be >= 1");

  const Matrix pilot_data =
      X.fully_observed() ? X.values : initial_completion(X);

  double gamma_max = 1.0;
  const double certificate = full_fusion_gamma_bound(pilot_data, weights);
  if (certificate > 0.0) {
    SolverConfig pilot;
    pilot.tol = 1e-3;
    pilot.max_iter = 2000;
    SolverState state;
    bool have_state = false;
    double g = certificate;
    for (int step = 0; step < 60; ++step) {
      pilot.gamma = g;
      state = solve_decomposed(pilot_data, weights, pilot, worker_count,
                               have_state ? &state : nullptr);
      have_state = true;
      if (fully_fused(state, weights)) break;
      g *= 2.0;
    }
    gamma_max = g;
  }

  Vector grid(size);
  if (size == 1) {
    grid[0] = gamma_max;
    return grid;
  }
  const double hi = std::log(gamma_max);
  const double lo = std::log(gamma_max * 1e-4);
  for (int i = 0; i < size; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (size - 1));
  grid[size - 1] = gamma_max;
  return grid;
}

PipelineResult pipeline(const ProbeMatrix& X, const PipeConfig& cfg) {
  const ValidationReport report = validate(X);
  if (!report.ok)
    throw validation_error("pipeline: input failed validation: " + report.summary());

  PipelineResult res;
  res.weights = compute_weights(X.positions, cfg.weight_sigma, cfg.zero_cut);

  const Vector grid =
      cfg.gamma_grid.size() > 0
          ? cfg.gamma_grid
          : auto_gamma_grid(X, res.weights, cfg.grid_size, cfg.worker_count);

  const FoldPlan plan = make_folds(X.mask, cfg.folds, cfg.seed);

  CvConfig cv_cfg = cfg.cv;
  cv_cfg.worker_count = cfg.worker_count;
  res.table = cross_validate(X, res.weights, grid, plan, cv_cfg);
  if (cfg.sigma_hat_override) res.table.sigma_hat = *cfg.sigma_hat_override;

  const auto [gamma_star, threshold] =
      select_and_threshold(res.table, X.n(), X.p(), cfg.log_base);

  res.fit = mm_solve(X, res.weights, gamma_star, cfg.final_fit, cfg.worker_count);
  res.regions = extract_regions(res.fit.state.V, threshold, cfg.fusion_rule);
  res.centroids = res.fit.state.U;
  return res;
}

}  // namespace spacc
