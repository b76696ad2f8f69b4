// Command-line front end: individual pipeline stages over CSV files, full runs, sweeps and bound reports.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modrec/csv.hpp"
#include "modrec/experiment.hpp"
#include "modrec/metrics_bounds.hpp"

namespace fs = std::filesystem;
using namespace modrec;

namespace {

struct SharedOptions {
  std::string config;
  std::string fn = "paper_fn";
  double sigma = 0.12;
  std::vector<Eigen::Index> n = {600};
  std::vector<std::uint64_t> seed = {1};
  std::vector<std::string> denoiser = {"lp"};
  int l = 2;
  double beta = 2.4;
  double bandwidth_const = 0.1;
  double bandwidth = 0.0;
  std::string kernel = "epanechnikov";
  double min_eig = 1e-8;
  Eigen::Index k = 1;
  bool k_auto = false;
  int qi_degree = 2;
  std::string out;
  int jobs = 1;
};

void add_model_flags(CLI::App* cmd, SharedOptions& o) {
  cmd->add_option("--config", o.config, "JSON experiment config; flags given explicitly override it");
  cmd->add_option("--fn", o.fn, "test function id (paper_fn, constant:c, linear:a,b, poly:c0,c1,..., cos_k:k)");
  cmd->add_option("--sigma", o.sigma, "Gaussian noise standard deviation");
  cmd->add_option("--n", o.n, "number of samples (comma-separated list for sweep)")->delimiter(',');
  cmd->add_option("--seed", o.seed, "noise seed (comma-separated list for sweep)")->delimiter(',');
}

void add_denoiser_flags(CLI::App* cmd, SharedOptions& o) {
  cmd->add_option("--denoiser", o.denoiser, "lp or knn (comma-separated list for sweep)")->delimiter(',');
  cmd->add_option("--l", o.l, "local polynomial order");
  cmd->add_option("--beta", o.beta, "smoothness index used by the bandwidth rule");
  cmd->add_option("--bandwidth-const", o.bandwidth_const, "constant of the bandwidth rule");
  cmd->add_option("--bandwidth", o.bandwidth, "explicit bandwidth (overrides the rule)");
  cmd->add_option("--kernel", o.kernel, "epanechnikov, box or triangular");
  cmd->add_option("--min-eig", o.min_eig, "floor on the smallest eigenvalue of the local design matrix");
  cmd->add_option("--k", o.k, "kNN neighbour count");
  cmd->add_flag("--k-auto", o.k_auto, "kNN with k = ceil(0.09 n^(2/3) (log n)^(1/3))");
}

bool given(const CLI::App* cmd, const char* flag) {
  const CLI::Option* opt = cmd->get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

/// Config file first, then explicitly passed flags.
/// Single-run commands default to one n, one seed and the lp denoiser; sweeps keep the full defaults.
ExperimentSpec resolve_spec(const CLI::App* cmd, const SharedOptions& o, bool sweep_defaults = false) {
  ExperimentSpec spec;
  if (!sweep_defaults) {
    spec.n_list = o.n;
    spec.seeds = o.seed;
    spec.denoisers = {DenoiserKind::lp};
  }
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw InvalidArgument("cannot open config '" + o.config + "'");
    spec = spec_from_json(nlohmann::json::parse(in), spec);
  }
  if (given(cmd, "--fn")) spec.function_id = o.fn;
  if (given(cmd, "--sigma")) spec.sigma = o.sigma;
  if (given(cmd, "--n")) spec.n_list = o.n;
  if (given(cmd, "--seed")) spec.seeds = o.seed;
  if (given(cmd, "--denoiser")) {
    spec.denoisers.clear();
    for (const auto& d : o.denoiser) spec.denoisers.push_back(parse_denoiser(d));
  }
  if (given(cmd, "--l")) spec.lp.l = o.l;
  if (given(cmd, "--beta")) spec.lp.beta = o.beta;
  if (given(cmd, "--bandwidth-const")) spec.lp.bandwidth_const = o.bandwidth_const;
  if (given(cmd, "--bandwidth")) spec.lp.bandwidth = o.bandwidth;
  if (given(cmd, "--kernel")) spec.lp.kernel = o.kernel;
  if (given(cmd, "--min-eig")) spec.lp.min_eig_threshold = o.min_eig;
  if (given(cmd, "--k")) {
    spec.knn.k = o.k;
    spec.knn.auto_rule = false;
  }
  if (given(cmd, "--k-auto")) spec.knn.auto_rule = o.k_auto;
  if (given(cmd, "--qi-degree")) spec.qi_degree = o.qi_degree;
  if (given(cmd, "--out")) spec.output_dir = o.out;
  if (given(cmd, "--jobs")) spec.jobs = o.jobs;
  return spec;
}

RunSpec single_run(const ExperimentSpec& spec) {
  if (spec.n_list.size() != 1 || spec.seeds.size() != 1 || spec.denoisers.size() != 1) {
    throw InvalidArgument("this command takes exactly one n, one seed and one denoiser");
  }
  return {spec.function_id, spec.sigma, spec.n_list[0], spec.seeds[0], spec.denoisers[0],
          spec.lp,          spec.knn,   spec.qi_degree};
}

UniformGrid grid_from_table(const CsvTable& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.rows.size());
  UniformGrid grid(n);
  const Eigen::VectorXd x = t.column("x");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(x[i] - grid.point(i)) > 1e-9) throw InvalidArgument("input x column is not the grid i/n");
  }
  return grid;
}

void emit(const std::string& path, const CsvTable& table) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, table);
  } else {
    write_csv_file(path, table);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery of smooth functions from noisy modulo-1 samples"};
  app.require_subcommand(1);
  SharedOptions o;
  std::string in_path;
  Eigen::Index resolution = 1001;

  auto* generate = app.add_subcommand("generate", "draw noisy modulo samples y_i = frac(f(x_i) + eta_i)");
  add_model_flags(generate, o);
  generate->add_option("--out", o.out, "output CSV (stdout if omitted)");

  auto* denoise_cmd = app.add_subcommand("denoise", "denoise modulo samples on the circle");
  denoise_cmd->add_option("--in", in_path, "samples CSV from `generate`")->required();
  add_denoiser_flags(denoise_cmd, o);
  denoise_cmd->add_option("--out", o.out, "output CSV (stdout if omitted)");
  denoise_cmd->add_option("--config", o.config, "JSON experiment config");

  auto* unwrap_cmd = app.add_subcommand("unwrap", "sequentially unwrap denoised phases");
  unwrap_cmd->add_option("--in", in_path, "CSV with x and ghat columns (from `denoise`)")->required();
  unwrap_cmd->add_option("--out", o.out, "output CSV (stdout if omitted)");

  auto* recover = app.add_subcommand("recover", "quasi-interpolate unwrapped samples into a dense table");
  recover->add_option("--in", in_path, "CSV with x and ftilde columns (from `unwrap`)")->required();
  recover->add_option("--qi-degree", o.qi_degree, "local polynomial degree of the quasi-interpolant");
  recover->add_option("--resolution", resolution, "number of table points on [0,1]");
  recover->add_option("--out", o.out, "output CSV (stdout if omitted)");

  auto* pipeline = app.add_subcommand("pipeline", "full run: generate, denoise, unwrap, recover, score");
  add_model_flags(pipeline, o);
  add_denoiser_flags(pipeline, o);
  pipeline->add_option("--qi-degree", o.qi_degree, "local polynomial degree of the quasi-interpolant");
  pipeline->add_option("--resolution", resolution, "points of the recovered-function table");
  pipeline->add_option("--out", o.out, "output directory (row only, on stdout, if omitted)");

  auto* sweep = app.add_subcommand("sweep", "denoisers x n x seeds, with per-(denoiser, n) summary");
  add_model_flags(sweep, o);
  add_denoiser_flags(sweep, o);
  sweep->add_option("--qi-degree", o.qi_degree, "local polynomial degree of the quasi-interpolant");
  sweep->add_option("--jobs", o.jobs, "worker threads");
  sweep->add_option("--out", o.out, "output directory");

  TheoryConstants tc;
  Eigen::Index bounds_n = 600;
  std::string bounds_config;
  auto* bounds = app.add_subcommand("bounds", "evaluate the theoretical constants, bandwidths and delta(n)");
  bounds->add_option("--config", bounds_config, "JSON with any of sigma, c, m_prime, k_max, lambda0, l, beta, n");
  bounds->add_option("--sigma", tc.sigma, "noise standard deviation");
  bounds->add_option("--c", tc.c, "probability exponent c >= 2");
  bounds->add_option("--m-prime", tc.m_prime, "Hoelder constant of cos(2 pi f) and sin(2 pi f)");
  bounds->add_option("--k-max", tc.k_max, "kernel upper bound");
  bounds->add_option("--lambda0", tc.lambda0, "eigenvalue floor of the local design matrix");
  bounds->add_option("--l", tc.l, "local polynomial order");
  bounds->add_option("--beta", tc.beta, "smoothness index");
  bounds->add_option("--n", bounds_n, "sample count");
  bounds->add_option("--bandwidth-const", o.bandwidth_const, "constant of the practical bandwidth rule");
  bounds->add_option("--lipschitz", o.bandwidth, "Lipschitz-scale constant L for the unwrapping condition");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      const ExperimentSpec spec = resolve_spec(generate, o);
      if (spec.n_list.size() != 1 || spec.seeds.size() != 1) throw InvalidArgument("generate takes one n and one seed");
      const TestFunction f = parse_test_function(spec.function_id);
      const UniformGrid grid(spec.n_list[0]);
      const std::uint64_t noise_seed = derive_noise_seed(spec.seeds[0], grid.size());
      const ModuloSamples s = sample_modulo(f, grid, {spec.sigma, noise_seed});
      CsvTable t;
      t.metadata = {"version=" + std::string(kVersion), "rng=" + std::string(kRngName), "fn=" + f.id,
                    "sigma=" + format_double(spec.sigma), "seed=" + std::to_string(spec.seeds[0]),
                    "noise_seed=" + std::to_string(noise_seed)};
      t.header = {"i", "x", "y", "f"};
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        t.rows.push_back({static_cast<double>(i + 1), grid.point(i), s.values[i], f(grid.point(i))});
      }
      emit(o.out, t);
    } else if (denoise_cmd->parsed()) {
      const ExperimentSpec spec = resolve_spec(denoise_cmd, o);
      if (spec.denoisers.size() != 1) throw InvalidArgument("denoise takes one denoiser");
      const CsvTable in = read_csv_file(in_path);
      const UniformGrid grid = grid_from_table(in);
      const ModuloSamples samples{grid, in.column("y")};
      double param = 0.0;
      const DenoisedModulo d = run_denoiser(samples, spec.denoisers[0], spec.lp, spec.knn, &param);
      CsvTable t;
      t.metadata = in.metadata;
      t.metadata.push_back("denoiser=" + std::string(denoiser_name(spec.denoisers[0])));
      t.metadata.push_back("bandwidth_or_k=" + format_double(param));
      t.header = {"i", "x", "y", "h_re", "h_im", "hhat_re", "hhat_im", "ghat"};
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        t.rows.push_back({static_cast<double>(i + 1), grid.point(i), samples.values[i], d.raw_estimates[i].real(),
                          d.raw_estimates[i].imag(), d.circle_estimates[i].real(), d.circle_estimates[i].imag(),
                          d.phases[i]});
      }
      emit(o.out, t);
    } else if (unwrap_cmd->parsed()) {
      const CsvTable in = read_csv_file(in_path);
      const UniformGrid grid = grid_from_table(in);
      const UnwrappedSamples u = unwrap(in.column("ghat"), grid);
      CsvTable t;
      t.metadata = in.metadata;
      t.header = {"i", "x", "ghat", "ftilde"};
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        t.rows.push_back({static_cast<double>(i + 1), grid.point(i), in.column("ghat")[i], u.values[i]});
      }
      emit(o.out, t);
    } else if (recover->parsed()) {
      const CsvTable in = read_csv_file(in_path);
      const UniformGrid grid = grid_from_table(in);
      const RecoveredFunction f_hat = build_qi(UnwrappedSamples{grid, in.column("ftilde")}, o.qi_degree);
      const Eigen::MatrixX2d table = tabulate(f_hat, resolution);
      CsvTable t;
      t.metadata = in.metadata;
      t.metadata.push_back("qi_degree=" + std::to_string(o.qi_degree));
      t.header = {"x", "fhat"};
      for (Eigen::Index k = 0; k < table.rows(); ++k) t.rows.push_back({table(k, 0), table(k, 1)});
      emit(o.out, t);
    } else if (pipeline->parsed()) {
      ExperimentSpec spec = resolve_spec(pipeline, o);
      const RunSpec run = single_run(spec);
      PipelineArtifacts art;
      const ResultRow row = run_pipeline(run, &art);
      spec.validate();
      const std::string row_text = rows_csv(spec, {row});
      if (o.out.empty()) {
        std::cout << row_text;
        return 0;
      }
      const fs::path dir(o.out);
      fs::create_directories(dir);
      write_text(dir / "row.csv", row_text);
      // plot data: x, truth, noisy sample, denoised phase, unwrapped estimate aligned by q*
      CsvTable plot;
      plot.metadata = {"version=" + std::string(kVersion), "fn=" + run.function_id,
                       "shift_q=" + std::to_string(row.report.shift_q)};
      plot.header = {"x", "truth", "sample", "ghat", "ftilde_aligned", "fhat_aligned"};
      const double q = static_cast<double>(row.report.shift_q);
      for (Eigen::Index i = 0; i < art.samples.grid.size(); ++i) {
        const double x = art.samples.grid.point(i);
        plot.rows.push_back({x, art.truth[i], art.samples.values[i], art.denoised->phases[i],
                             art.unwrapped->values[i] + q, (*art.recovered)(x) + q});
      }
      write_csv_file((dir / "plot_data.csv").string(), plot);
      const Eigen::MatrixX2d table = tabulate(*art.recovered, resolution);
      const TestFunction f = parse_test_function(run.function_id);
      CsvTable rec;
      rec.metadata = plot.metadata;
      rec.header = {"x", "fhat_aligned", "truth"};
      for (Eigen::Index k = 0; k < table.rows(); ++k) rec.rows.push_back({table(k, 0), table(k, 1) + q, f(table(k, 0))});
      write_csv_file((dir / "recovered.csv").string(), rec);
      std::cout << row_text;
    } else if (sweep->parsed()) {
      const ExperimentSpec spec = resolve_spec(sweep, o, true);
      spec.validate();
      const auto rows = run_sweep(spec);
      const fs::path dir(spec.output_dir);
      fs::create_directories(dir);
      write_text(dir / "rows.csv", rows_csv(spec, rows));
      write_text(dir / "summary.csv", summary_csv(spec, summarize(rows)));
      write_text(dir / "timings.csv", timings_csv(rows));
      std::cout << summary_csv(spec, summarize(rows));
    } else if (bounds->parsed()) {
      double lipschitz = 1.0;
      if (!bounds_config.empty()) {
        std::ifstream in(bounds_config);
        if (!in) throw InvalidArgument("cannot open config '" + bounds_config + "'");
        const auto j = nlohmann::json::parse(in);
        // flags given explicitly win over the file
        for (const auto& [key, value] : j.items()) {
          const auto skip = [&](const char* flag) { return given(bounds, flag); };
          if (key == "sigma") { if (!skip("--sigma")) tc.sigma = value.get<double>(); }
          else if (key == "c") { if (!skip("--c")) tc.c = value.get<double>(); }
          else if (key == "m_prime") { if (!skip("--m-prime")) tc.m_prime = value.get<double>(); }
          else if (key == "k_max") { if (!skip("--k-max")) tc.k_max = value.get<double>(); }
          else if (key == "lambda0") { if (!skip("--lambda0")) tc.lambda0 = value.get<double>(); }
          else if (key == "l") { if (!skip("--l")) tc.l = value.get<int>(); }
          else if (key == "beta") { if (!skip("--beta")) tc.beta = value.get<double>(); }
          else if (key == "n") { if (!skip("--n")) bounds_n = value.get<Eigen::Index>(); }
          else if (key == "bandwidth_const") { if (!skip("--bandwidth-const")) o.bandwidth_const = value.get<double>(); }
          else if (key == "lipschitz") lipschitz = value.get<double>();
          else throw InvalidArgument("unknown bounds config key '" + key + "'");
        }
      }
      if (given(bounds, "--lipschitz")) lipschitz = o.bandwidth;
      tc.validate();
      const double delta = theoretical_delta(tc, bounds_n);
      SmoothnessParams sp;
      sp.l = tc.l;
      sp.alpha = std::min(1.0, std::max(1e-12, tc.beta - tc.l));
      sp.M = lipschitz;
      sp.kappa = lipschitz;
      nlohmann::ordered_json r;
      r["constants"] = {{"sigma", tc.sigma}, {"c", tc.c},   {"m_prime", tc.m_prime}, {"k_max", tc.k_max},
                        {"lambda0", tc.lambda0}, {"l", tc.l}, {"beta", tc.beta},       {"n", bounds_n}};
      r["a_sigma"] = a_sigma(tc.sigma);
      r["c_star"] = c_star(tc.k_max, tc.lambda0);
      r["q1"] = q1(tc);
      r["q2"] = q2(tc);
      r["theoretical_bandwidth"] = theoretical_bandwidth(tc, bounds_n);
      r["practical_bandwidth"] = practical_bandwidth(o.bandwidth_const, tc.beta, bounds_n);
      r["delta"] = delta;
      r["unwrap_feasible"] = check_unwrap_feasibility(delta, sp, bounds_n);
      std::cout << r.dump(2) << '\n';
    }
  } catch (const PipelineError& e) {
    std::cerr << "error in stage " << e.stage() << " (" << e.kind() << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
