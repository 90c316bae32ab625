#pragma once

#include <cstdint>
#include <numbers>
#include <optional>

#include "spacc/missing.hpp"
#include "spacc/solver.hpp"
#include "spacc/types.hpp"

namespace spacc {

struct EntryIndex {
  Index row = 0;
  Index col = 0;
  bool operator==(const EntryIndex&) const = default;
};

/// K disjoint sets of observed-entry coordinates whose union is the full
/// observed set; sizes differ by at most one.
struct FoldPlan {
  std::vector<std::vector<EntryIndex>> folds;
  std::uint64_t seed = 0;
};

/// Grid of held-out errors plus everything the selection step derives from
/// them. Invalid cells (inner solver failures) hold NaN and valid = false.
struct CvTable {
  Vector gamma_grid;   // increasing, length T
  Matrix mse;          // K x T held-out mean squared errors
  Mask valid;          // K x T
  Matrix fused_share;  // K x T share of exactly fused links (sparsity level)
  double gamma_star = 0.0;
  double sigma_hat = 0.0;
  double threshold = 0.0;
};

/// Uniform random partition of the observed coordinates into k near-equal
/// folds; deterministic given the seed.
FoldPlan make_folds(const Mask& mask, int k, std::uint64_t seed);

/// Robust noise scale from within-subject adjacent first differences:
/// median(|X(i,j+1) - X(i,j)|) / (0.6745 * sqrt(2)) over pairs with both
/// entries observed. Needs at least two such pairs.
double estimate_noise(const Matrix& values, const Mask& mask);

/// sqrt(log(p) / n) * sigma_hat, log taken in the given base.
double fusion_threshold(double p, double n, double sigma_hat,
                        double log_base = std::numbers::e);

struct CvConfig {
  MmConfig mm;  // per-cell budget; defaults trade accuracy for grid speed
  int worker_count = 1;

  CvConfig() {
    mm.outer_tol = 1e-5;
    mm.inner.tol = 1e-4;
    mm.inner.max_iter = 3000;
    mm.max_outer = 12;
    mm.inner_iter_budget = 9000;
  }
};

/// Wold-style element-wise cross-validation: each cell treats its fold's
/// entries (plus all truly missing entries) as missing, refits, and scores
/// the fold entries against the held-back values; MSE is normalized by
/// fold size. Cells run independently; failures invalidate the cell only.
/// Also records sigma_hat estimated once from the full observed data.
CvTable cross_validate(const ProbeMatrix& X, const WeightChain& weights,
                       const Vector& gamma_grid, const FoldPlan& plan,
                       const CvConfig& cfg);

/// Picks gamma_star as the argmin of the fold-averaged MSE (ties toward
/// larger gamma; gammas with no valid cell are skipped) and fills in the
/// fusion threshold from table.sigma_hat. Returns (gamma_star, threshold).
std::pair<double, double> select_and_threshold(CvTable& table, Index n,
                                               Index p,
                                               double log_base = std::numbers::e);

/// Closed-form full-fusion certificate: the smallest gamma at which the
/// all-fused solution is optimal on every span (max over links of the
/// norm of the cumulative centered column sums divided by the weight).
double full_fusion_gamma_bound(const Matrix& X, const WeightChain& weights);

/// Grid of `size` log-spaced values from 1e-4 * gamma_max to gamma_max,
/// where gamma_max is the smallest doubling of the certificate value whose
/// pilot solve fully fuses every span. Missing entries are completed with
/// column means for the pilot.
Vector auto_gamma_grid(const ProbeMatrix& X, const WeightChain& weights,
                       int size, int worker_count = 1);

struct PipeConfig {
  double weight_sigma = 0.0002;  // methylation-style decay per basepair
  double zero_cut = 0.01;
  Vector gamma_grid;  // empty: build automatically
  int grid_size = 50;
  int folds = 5;
  std::uint64_t seed = 1;
  CvConfig cv;
  MmConfig final_fit;  // tighter budget for the selected-gamma fit
  int worker_count = 1;
  double log_base = std::numbers::e;
  std::optional<double> sigma_hat_override;
  FusionRule fusion_rule = FusionRule::MaxAbs;
};

struct PipelineResult {
  RegionAssignment regions;
  Matrix centroids;
  CvTable table;
  MmResult fit;  // diagnostics of the final fit at gamma_star
  WeightChain weights;
};

/// End-to-end: weights -> cross-validation -> selection and threshold ->
/// refit at gamma_star on the original mask -> region extraction.
PipelineResult pipeline(const ProbeMatrix& X, const PipeConfig& cfg);

}  // namespace spacc
