// Command-line front end: fit, cross-validate, simulate and evaluate
// workflows over the TSV formats defined in spacc/io.hpp. Every command is
// a deterministic function of its inputs, configuration and seed.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spacc/core.hpp"
#include "spacc/cv.hpp"
#include "spacc/io.hpp"
#include "spacc/metrics.hpp"
#include "spacc/missing.hpp"
#include "spacc/rng.hpp"
#include "spacc/simulate.hpp"
#include "spacc/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

double kind_sigma(const std::string& kind, std::optional<double> override_sigma) {
  if (override_sigma) return *override_sigma;
  if (kind == "cnv") return 0.00001;
  if (kind == "methylation") return 0.0002;
  throw spacc::validation_error(
      "kind 'custom' needs an explicit --weight-sigma");
}

spacc::FusionRule parse_rule(const std::string& name) {
  if (name == "maxabs") return spacc::FusionRule::MaxAbs;
  if (name == "colnorm") return spacc::FusionRule::ColumnNorm;
  throw spacc::validation_error("unknown fusion rule: " + name);
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw spacc::io_error("cannot create output dir: " + dir);
}

struct FitOptions {
  std::string input;
  std::string output_dir;
  double gamma = 0.0;
  double threshold = 0.0;
  std::string kind = "methylation";
  std::optional<double> weight_sigma;
  double zero_cut = 0.01;
  double nu = 0.25;
  double tol = 1e-6;
  int max_iter = 20000;
  double outer_tol = 1e-6;
  int max_outer = 50;
  int workers = 1;
  std::string fusion_rule = "maxabs";
  bool write_imputed = false;
};

struct CvOptions : FitOptions {
  std::vector<double> gamma_grid;
  int grid_size = 50;
  int folds = 5;
  std::uint64_t seed = 1;
  std::optional<double> sigma_hat;
  double log_base = std::numbers::e;
  double cv_tol = 1e-4;
  int cv_max_iter = 4000;
};

struct SimulateOptions {
  std::string preset;
  std::string output_dir;
  std::uint64_t seed = 1;
  std::optional<spacc::Index> n;
  std::optional<spacc::Index> p;
  std::optional<int> segments;
  std::optional<double> q, a, b, noise_sigma;
  std::optional<double> sigma_w, sigma_b;
  std::optional<double> kappa, beta_seed;
  int causal_count = 5;
};

struct EvaluateOptions {
  std::string truth;
  std::string estimate;
  std::string output_dir;
};

spacc::Dataset make_dataset(spacc::ProbeMatrix matrix) {
  spacc::Dataset data;
  data.matrix = std::move(matrix);
  for (spacc::Index j = 0; j < data.matrix.p(); ++j)
    data.probe_ids.push_back("p" + std::to_string(j + 1));
  for (spacc::Index i = 0; i < data.matrix.n(); ++i)
    data.subject_ids.push_back("s" + std::to_string(i + 1));
  return data;
}

spacc::Dataset load_and_validate(const std::string& path) {
  spacc::Dataset data = spacc::read_probe_matrix(path);
  const spacc::ValidationReport report = spacc::validate(data.matrix);
  if (!report.ok)
    throw spacc::validation_error(path + ": " + report.summary());
  return data;
}

int run_fit(const FitOptions& opt) {
  const spacc::Dataset data = load_and_validate(opt.input);
  ensure_output_dir(opt.output_dir);

  const spacc::WeightChain weights = spacc::compute_weights(
      data.matrix.positions, kind_sigma(opt.kind, opt.weight_sigma), opt.zero_cut);

  spacc::MmConfig mm;
  mm.outer_tol = opt.outer_tol;
  mm.max_outer = opt.max_outer;
  mm.inner.nu = opt.nu;
  mm.inner.tol = opt.tol;
  mm.inner.max_iter = opt.max_iter;

  const spacc::MmResult fit =
      spacc::mm_solve(data.matrix, weights, opt.gamma, mm, opt.workers);
  const spacc::RegionAssignment regions = spacc::extract_regions(
      fit.state.V, opt.threshold, parse_rule(opt.fusion_rule));

  spacc::write_regions(out_path(opt.output_dir, "regions.tsv"), data, regions);
  spacc::write_matrix_like(out_path(opt.output_dir, "centroids.tsv"), data,
                           fit.state.U);
  if (opt.write_imputed && !data.matrix.fully_observed())
    spacc::write_matrix_like(out_path(opt.output_dir, "imputed.tsv"), data,
                             spacc::complete(data.matrix, fit.state.U));

  spacc::write_key_values(
      out_path(opt.output_dir, "diagnostics.txt"),
      {{"command", "fit"},
       {"input", opt.input},
       {"gamma", spacc::format_double(opt.gamma)},
       {"threshold", spacc::format_double(opt.threshold)},
       {"kind", opt.kind},
       {"weight_sigma",
        spacc::format_double(kind_sigma(opt.kind, opt.weight_sigma))},
       {"zero_cut", spacc::format_double(opt.zero_cut)},
       {"nu", spacc::format_double(opt.nu)},
       {"tol", spacc::format_double(opt.tol)},
       {"max_iter", std::to_string(opt.max_iter)},
       {"fusion_rule", opt.fusion_rule},
       {"iterations", std::to_string(fit.state.iterations)},
       {"outer_iterations", std::to_string(fit.outer_iterations)},
       {"residual", spacc::format_double(fit.state.final_residual)},
       {"converged", fit.state.converged ? "true" : "false"},
       {"objective",
        spacc::format_double(spacc::missing_objective(
            data.matrix, fit.state.U, weights, opt.gamma))},
       {"regions", std::to_string(regions.region_count())}});

  if (!fit.state.converged) {
    std::cerr << "spacc fit: solver stopped at max_iter without reaching tol\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_cv(const CvOptions& opt) {
  const spacc::Dataset data = load_and_validate(opt.input);
  ensure_output_dir(opt.output_dir);

  spacc::PipeConfig cfg;
  cfg.weight_sigma = kind_sigma(opt.kind, opt.weight_sigma);
  cfg.zero_cut = opt.zero_cut;
  cfg.grid_size = opt.grid_size;
  cfg.folds = opt.folds;
  cfg.seed = opt.seed;
  cfg.worker_count = opt.workers;
  cfg.log_base = opt.log_base;
  cfg.sigma_hat_override = opt.sigma_hat;
  cfg.fusion_rule = parse_rule(opt.fusion_rule);
  if (!opt.gamma_grid.empty()) {
    cfg.gamma_grid.resize(static_cast<spacc::Index>(opt.gamma_grid.size()));
    for (std::size_t t = 0; t < opt.gamma_grid.size(); ++t)
      cfg.gamma_grid[static_cast<spacc::Index>(t)] = opt.gamma_grid[t];
  }
  cfg.final_fit.outer_tol = opt.outer_tol;
  cfg.final_fit.max_outer = opt.max_outer;
  cfg.final_fit.inner.nu = opt.nu;
  cfg.final_fit.inner.tol = opt.tol;
  cfg.final_fit.inner.max_iter = opt.max_iter;
  cfg.cv.mm.inner.nu = opt.nu;
  cfg.cv.mm.inner.tol = opt.cv_tol;
  cfg.cv.mm.inner.max_iter = opt.cv_max_iter;

  const spacc::PipelineResult result = spacc::pipeline(data.matrix, cfg);

  spacc::write_regions(out_path(opt.output_dir, "regions.tsv"), data,
                       result.regions);
  spacc::write_matrix_like(out_path(opt.output_dir, "centroids.tsv"), data,
                           result.centroids);
  spacc::write_cv_table(out_path(opt.output_dir, "cv_table.csv"), result.table);
  spacc::write_sparsity_curve(out_path(opt.output_dir, "sparsity_curve.csv"),
                              result.table);
  if (opt.write_imputed && !data.matrix.fully_observed())
    spacc::write_matrix_like(
        out_path(opt.output_dir, "imputed.tsv"), data,
        spacc::complete(data.matrix, result.centroids));

  // Effective configuration plus the selected values; worker count is a
  // scheduling knob with no effect on results and is deliberately omitted.
  spacc::write_key_values(
      out_path(opt.output_dir, "run_summary.txt"),
      {{"command", "cv"},
       {"input", opt.input},
       {"kind", opt.kind},
       {"weight_sigma", spacc::format_double(cfg.weight_sigma)},
       {"zero_cut", spacc::format_double(cfg.zero_cut)},
       {"grid_size", std::to_string(result.table.gamma_grid.size())},
       {"folds", std::to_string(cfg.folds)},
       {"seed", std::to_string(cfg.seed)},
       {"nu", spacc::format_double(opt.nu)},
       {"tol", spacc::format_double(opt.tol)},
       {"max_iter", std::to_string(opt.max_iter)},
       {"cv_tol", spacc::format_double(opt.cv_tol)},
       {"cv_max_iter", std::to_string(opt.cv_max_iter)},
       {"log_base", spacc::format_double(opt.log_base)},
       {"fusion_rule", opt.fusion_rule},
       {"gamma_star", spacc::format_double(result.table.gamma_star)},
       {"sigma_hat", spacc::format_double(result.table.sigma_hat)},
       {"threshold", spacc::format_double(result.table.threshold)},
       {"regions", std::to_string(result.regions.region_count())},
       {"converged", result.fit.state.converged ? "true" : "false"}});

  if (!result.fit.state.converged) {
    std::cerr << "spacc cv: final fit stopped at max_iter without reaching tol\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_simulate(const SimulateOptions& opt) {
  ensure_output_dir(opt.output_dir);
  const std::uint64_t pos_seed = spacc::derive_seed(opt.seed, 1);
  const std::uint64_t seg_seed = spacc::derive_seed(opt.seed, 2);
  const std::uint64_t data_seed = spacc::derive_seed(opt.seed, 3);

  auto segment_spans = [&](spacc::Index p, int segments) {
    const double mean_len =
        std::max(1.0, static_cast<double>(p) / std::max(1, segments));
    return spacc::gen_segments(p, mean_len, seg_seed);
  };

  spacc::Dataset data;
  spacc::RegionAssignment truth;

  if (opt.preset == "cnv-easy" || opt.preset == "cnv-hard") {
    const bool easy = opt.preset == "cnv-easy";
    spacc::CnvSimParams params;
    params.n = opt.n.value_or(20);
    params.p = opt.p.value_or(500);
    params.q = opt.q.value_or(easy ? 0.7 : 0.5);
    params.a = opt.a.value_or(easy ? 0.2 : 0.05);
    params.b = opt.b.value_or(easy ? 0.4 : 0.3);
    params.sigma = opt.noise_sigma.value_or(0.1);
    params.positions = spacc::gen_positions(params.p, 500, 1500, pos_seed);
    params.segments = segment_spans(
        params.p, opt.segments.value_or(easy ? static_cast<int>(params.p / 50)
                                             : static_cast<int>(params.p / 20)));
    params.seed = data_seed;
    auto [matrix, labels] = spacc::simulate_cnv(params);
    data = make_dataset(std::move(matrix));
    truth = std::move(labels);
  } else if (opt.preset == "meth-high" || opt.preset == "meth-medium" ||
             opt.preset == "meth-low") {
    spacc::MethSimParams params;
    params.n = opt.n.value_or(50);
    params.p = opt.p.value_or(300);
    params.sigma_w = opt.sigma_w.value_or(100000.0);
    params.sigma_b = opt.sigma_b.value_or(
        opt.preset == "meth-high" ? 10.0
                                  : (opt.preset == "meth-medium" ? 100.0 : 1000.0));
    params.positions = spacc::gen_positions(params.p, 50, 300, pos_seed);
    params.segments = segment_spans(params.p, opt.segments.value_or(15));
    params.seed = data_seed;
    auto [matrix, labels] = spacc::simulate_methylation(params);
    data = make_dataset(std::move(matrix));
    truth = std::move(labels);
  } else if (opt.preset == "rewas") {
    spacc::RewasSimParams params;
    params.n = opt.n.value_or(94);
    params.p = opt.p.value_or(2000);
    params.segments = segment_spans(
        params.p, opt.segments.value_or(static_cast<int>(params.p / 10)));
    params.concentration = opt.kappa.value_or(20.0);
    params.beta_seed = opt.beta_seed.value_or(1.0);
    params.noise_sigma = opt.noise_sigma.value_or(1.0);
    params.seed = data_seed;
    const int causal =
        std::min<int>(opt.causal_count, static_cast<int>(params.segments.size()));
    spacc::Rng causal_rng(spacc::derive_seed(opt.seed, 4));
    std::vector<spacc::Index> pool(params.segments.size());
    for (std::size_t g = 0; g < pool.size(); ++g)
      pool[g] = static_cast<spacc::Index>(g);
    causal_rng.shuffle(pool);
    params.causal_regions.assign(pool.begin(), pool.begin() + causal);
    std::sort(params.causal_regions.begin(), params.causal_regions.end());

    const spacc::RewasData rewas = spacc::simulate_rewas(params);
    data = make_dataset(rewas.matrix);
    truth = rewas.truth;
    spacc::write_response(out_path(opt.output_dir, "response.tsv"),
                          data.subject_ids, rewas.response);
    std::string causal_list;
    for (spacc::Index g : params.causal_regions) {
      if (!causal_list.empty()) causal_list += ",";
      causal_list += std::to_string(g + 1);
    }
    spacc::write_key_values(out_path(opt.output_dir, "causal.txt"),
                            {{"causal_regions", causal_list}});
  } else {
    throw spacc::validation_error("unknown preset: " + opt.preset);
  }

  spacc::write_probe_matrix(out_path(opt.output_dir, "data.tsv"), data);
  spacc::write_truth(out_path(opt.output_dir, "truth.tsv"), data.probe_ids, truth);

  std::cout << "simulated " << opt.preset << ": n=" << data.matrix.n()
            << " p=" << data.matrix.p() << " regions=" << truth.region_count()
            << " seed=" << opt.seed << "\n";
  return kExitOk;
}

int run_evaluate(const EvaluateOptions& opt) {
  const spacc::RegionAssignment truth = spacc::read_labels(opt.truth);
  const spacc::RegionAssignment estimate = spacc::read_labels(opt.estimate);
  const spacc::ContingencyTable table = spacc::contingency(truth, estimate);

  const std::vector<std::pair<std::string, double>> rows = {
      {"rand", spacc::rand_index(table)},
      {"adjusted_rand", spacc::adjusted_rand(table)},
      {"jaccard", spacc::jaccard(table)},
      {"variation_of_information", spacc::variation_of_information(table)}};

  for (const auto& [name, value] : rows)
    std::cout << name << " = " << spacc::format_double(value) << "\n";

  if (!opt.output_dir.empty()) {
    ensure_output_dir(opt.output_dir);
    spacc::write_metrics_report(out_path(opt.output_dir, "metrics.csv"), rows);
  }
  return kExitOk;
}

void add_fit_flags(CLI::App* cmd, FitOptions& opt, bool with_gamma) {
  cmd->add_option("--input", opt.input, "Probe matrix TSV")->required();
  cmd->add_option("--output-dir", opt.output_dir, "Output directory")->required();
  if (with_gamma)
    cmd->add_option("--gamma", opt.gamma, "Regularization level")->required();
  cmd->add_option("--kind", opt.kind,
                  "Data kind selecting the weight decay default")
      ->check(CLI::IsMember({"cnv", "methylation", "custom"}));
  cmd->add_option("--weight-sigma", opt.weight_sigma,
                  "Weight decay rate per basepair (overrides --kind)");
  cmd->add_option("--zero-cut", opt.zero_cut, "Weight hard-threshold level");
  cmd->add_option("--nu", opt.nu, "Dual step size");
  cmd->add_option("--tol", opt.tol, "Solver tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "Solver iteration cap");
  cmd->add_option("--outer-tol", opt.outer_tol, "Missing-data outer tolerance");
  cmd->add_option("--max-outer", opt.max_outer, "Missing-data outer cap");
  cmd->add_option("--workers", opt.workers, "Worker thread count");
  cmd->add_option("--fusion-rule", opt.fusion_rule,
                  "Link fusion rule: maxabs or colnorm")
      ->check(CLI::IsMember({"maxabs", "colnorm"}));
  cmd->add_flag("--write-imputed", opt.write_imputed,
                "Also export the imputed matrix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial convex clustering of genomic probes into regions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (key = value lines)");

  FitOptions fit_opt;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit at a fixed gamma and extract regions");
  add_fit_flags(fit_cmd, fit_opt, /*with_gamma=*/true);
  fit_cmd->add_option("--threshold", fit_opt.threshold,
                      "Fusion threshold applied to V");

  CvOptions cv_opt;
  CLI::App* cv_cmd = app.add_subcommand(
      "cv", "Cross-validate gamma, fit and threshold automatically");
  add_fit_flags(cv_cmd, cv_opt, /*with_gamma=*/false);
  cv_cmd->add_option("--gamma-grid", cv_opt.gamma_grid,
                     "Explicit increasing gamma grid")
      ->delimiter(',');
  cv_cmd->add_option("--grid-size", cv_opt.grid_size, "Automatic grid length");
  cv_cmd->add_option("--folds", cv_opt.folds, "Cross-validation folds");
  cv_cmd->add_option("--seed", cv_opt.seed, "Fold RNG seed");
  cv_cmd->add_option("--sigma-hat", cv_opt.sigma_hat,
                     "Override the noise estimate");
  cv_cmd->add_option("--log-base", cv_opt.log_base,
                     "Base of log(p) in the threshold");
  cv_cmd->add_option("--cv-tol", cv_opt.cv_tol, "Per-cell solver tolerance");
  cv_cmd->add_option("--cv-max-iter", cv_opt.cv_max_iter,
                     "Per-cell solver iteration cap");

  SimulateOptions sim_opt;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Generate a synthetic dataset with truth");
  sim_cmd->add_option("--preset", sim_opt.preset,
                      "cnv-easy, cnv-hard, meth-high, meth-medium, meth-low, rewas")
      ->required()
      ->check(CLI::IsMember({"cnv-easy", "cnv-hard", "meth-high", "meth-medium",
                             "meth-low", "rewas"}));
  sim_cmd->add_option("--output-dir", sim_opt.output_dir, "Output directory")
      ->required();
  sim_cmd->add_option("--seed", sim_opt.seed, "Generator seed");
  sim_cmd->add_option("--n", sim_opt.n, "Subject count");
  sim_cmd->add_option("--p", sim_opt.p, "Probe count");
  sim_cmd->add_option("--segments", sim_opt.segments, "Target region count");
  sim_cmd->add_option("--q", sim_opt.q, "Shift probability (cnv)");
  sim_cmd->add_option("--a", sim_opt.a, "Shift magnitude lower bound (cnv)");
  sim_cmd->add_option("--b", sim_opt.b, "Shift magnitude upper bound (cnv)");
  sim_cmd->add_option("--noise-sigma", sim_opt.noise_sigma,
                      "Noise level (cnv, rewas)");
  sim_cmd->add_option("--sigma-w", sim_opt.sigma_w,
                      "Within-region decay length in bp (methylation)");
  sim_cmd->add_option("--sigma-b", sim_opt.sigma_b,
                      "Between-region decay length in bp (methylation)");
  sim_cmd->add_option("--kappa", sim_opt.kappa,
                      "Probe concentration about region means (rewas)");
  sim_cmd->add_option("--beta-seed", sim_opt.beta_seed,
                      "Coefficient location (rewas)");
  sim_cmd->add_option("--causal-count", sim_opt.causal_count,
                      "Causal region count (rewas)");

  EvaluateOptions eval_opt;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Compare two region label files with clustering metrics");
  eval_cmd->add_option("--truth", eval_opt.truth, "Reference label file")
      ->required();
  eval_cmd->add_option("--estimate", eval_opt.estimate, "Estimated label file")
      ->required();
  eval_cmd->add_option("--output-dir", eval_opt.output_dir,
                       "Optional directory for metrics.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_opt);
    if (cv_cmd->parsed()) return run_cv(cv_opt);
    if (sim_cmd->parsed()) return run_simulate(sim_opt);
    if (eval_cmd->parsed()) return run_evaluate(eval_opt);
  } catch (const spacc::validation_error& e) {
    std::cerr << "spacc: validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const spacc::convergence_error& e) {
    std::cerr << "spacc: solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const spacc::io_error& e) {
    std::cerr << "spacc: i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "spacc: error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
