#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modrec/denoised.hpp"
#include "modrec/knn_denoiser.hpp"
#include "modrec/lp_denoiser.hpp"
#include "modrec/metrics_bounds.hpp"
#include "modrec/quasi_interpolant.hpp"
#include "modrec/signal_model.hpp"
#include "modrec/unwrapper.hpp"

namespace modrec {

inline constexpr std::string_view kVersion = "modrec 0.1.0";

enum class DenoiserKind { lp, knn };

std::string_view denoiser_name(DenoiserKind d);
DenoiserKind parse_denoiser(std::string_view name);

struct LpParams {
  int l = 2;
  double beta = 2.4;
  double bandwidth_const = 0.1;
  /// Explicit bandwidth; overrides the constant * (log n / n)^{beta/(2 beta + 1)} rule.
  std::optional<double> bandwidth;
  std::string kernel = "epanechnikov";
  double min_eig_threshold = 1e-8;

  LpConfig config(Eigen::Index n) const;
};

struct KnnParams {
  Eigen::Index k = 1;
  bool auto_rule = true;

  KnnConfig config() const { return {k, auto_rule}; }
};

struct ExperimentSpec {
  std::string function_id = "paper_fn";
  double sigma = 0.12;
  std::vector<Eigen::Index> n_list = {150, 300, 600, 1200};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<DenoiserKind> denoisers = {DenoiserKind::lp, DenoiserKind::knn};
  LpParams lp;
  KnnParams knn;
  int qi_degree = 2;
  std::string output_dir = "out";
  /// Worker threads for sweeps; output does not depend on it.
  int jobs = 1;

  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Reads the fields present in `j` over `base`; unknown keys are rejected.
ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});

/// One (function, sigma, n, seed, denoiser) run.
struct RunSpec {
  std::string function_id = "paper_fn";
  double sigma = 0.12;
  Eigen::Index n = 600;
  std::uint64_t seed = 1;
  DenoiserKind denoiser = DenoiserKind::lp;
  LpParams lp;
  KnnParams knn;
  int qi_degree = 2;
};

/// Noise stream seed of a run; shared by every denoiser at the same (seed, n).
std::uint64_t derive_noise_seed(std::uint64_t seed, Eigen::Index n);

/// Failure inside the pipeline, tagged with the stage that raised it.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, std::string kind, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), kind_(std::move(kind)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string stage_;
  std::string kind_;
};

struct ResultRow {
  DenoiserKind denoiser = DenoiserKind::lp;
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  std::uint64_t noise_seed = 0;
  ErrorReport report;
  /// max |f^(x_i) + q - f(x_i)| with q = report.shift_q.
  double recovered_aligned_max = 0.0;
  /// Bandwidth b for lp, k for knn.
  double bandwidth_or_k = 0.0;
  double runtime_ms = 0.0;
  /// "ok" or "<stage>:<error kind>".
  std::string status = "ok";
};

struct PipelineArtifacts {
  ModuloSamples samples{UniformGrid(1), Eigen::VectorXd()};
  Eigen::VectorXd truth;
  std::optional<DenoisedModulo> denoised;
  std::optional<UnwrappedSamples> unwrapped;
  std::optional<RecoveredFunction> recovered;
};

/// generate -> denoise -> unwrap -> quasi-interpolate -> metrics. Throws PipelineError.
ResultRow run_pipeline(const RunSpec& run, PipelineArtifacts* artifacts = nullptr);

/// Stage-1 dispatch shared by the pipeline and the CLI.
DenoisedModulo run_denoiser(const ModuloSamples& samples, DenoiserKind kind, const LpParams& lp, const KnnParams& knn,
                            double* bandwidth_or_k = nullptr);

/// Every (denoiser, n, seed) combination, sorted by (denoiser, n, seed). Failed runs keep a row with
/// NaN metrics and an error status.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

struct Stat {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SummaryRow {
  DenoiserKind denoiser = DenoiserKind::lp;
  Eigen::Index n = 0;
  int runs_ok = 0;
  int runs_failed = 0;
  Stat wrap_rmse, wrap_max, aligned_rmse, aligned_max, recovered_aligned_max;
};

/// Mean and sample standard deviation per (denoiser, n) over successful runs.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

std::string rows_csv(const ExperimentSpec& spec, const std::vector<ResultRow>& rows);
std::string summary_csv(const ExperimentSpec& spec, const std::vector<SummaryRow>& summary);
/// Wall-clock runtimes, kept apart from rows_csv so that the latter is reproducible byte for byte.
std::string timings_csv(const std::vector<ResultRow>& rows);

}  // namespace modrec
