#include "modrec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "modrec/csv.hpp"
#include "modrec/kernel.hpp"

namespace modrec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const IllConditioned& e) {
    throw PipelineError(name, "IllConditioned", e.what());
  } catch (const InsufficientSamples& e) {
    throw PipelineError(name, "InsufficientSamples", e.what());
  } catch (const InvalidArgument& e) {
    throw PipelineError(name, "InvalidArgument", e.what());
  }
}

Stat stat_of(const std::vector<double>& v) {
  Stat s;
  if (v.empty()) {
    s.mean = s.std = s.min = s.max = std::nan("");
    return s;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  // guard against rounding pushing the mean outside [min, max]
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

void metadata_block(std::ostringstream& out, const ExperimentSpec& spec) {
  out << "# version=" << kVersion << '\n';
  out << "# rng=" << kRngName << '\n';
  out << "# seeds=" << join_seeds(spec.seeds) << '\n';
  nlohmann::json j = to_json(spec);
  j.erase("jobs");
  j.erase("output_dir");
  out << "# spec=" << j.dump() << '\n';
}

}  // namespace

std::string_view denoiser_name(DenoiserKind d) { return d == DenoiserKind::lp ? "lp" : "knn"; }

DenoiserKind parse_denoiser(std::string_view name) {
  if (name == "lp") return DenoiserKind::lp;
  if (name == "knn") return DenoiserKind::knn;
  throw InvalidArgument("unknown denoiser '" + std::string(name) + "'");
}

LpConfig LpParams::config(Eigen::Index n) const {
  LpConfig cfg;
  cfg.order_l = l;
  cfg.kernel = parse_kernel(kernel);
  cfg.min_eig_threshold = min_eig_threshold;
  cfg.bandwidth_b = bandwidth ? *bandwidth : practical_bandwidth(bandwidth_const, beta, n);
  return cfg;
}

void ExperimentSpec::validate() const {
  if (n_list.empty()) throw InvalidArgument("n_list must not be empty");
  if (seeds.empty()) throw InvalidArgument("seeds must not be empty");
  if (denoisers.empty()) throw InvalidArgument("at least one denoiser is required");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  if (lp.l < 0) throw InvalidArgument("lp.l must be nonnegative");
  if (qi_degree < 0) throw InvalidArgument("qi_degree must be nonnegative");
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  for (const auto n : n_list) {
    if (n < 8 * (lp.l + 1)) throw InvalidArgument("every n must be at least 8 (l + 1)");
  }
  parse_kernel(lp.kernel);
  parse_test_function(function_id);
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["function_id"] = spec.function_id;
  j["sigma"] = spec.sigma;
  j["n_list"] = spec.n_list;
  j["seeds"] = spec.seeds;
  std::vector<std::string> d;
  for (auto k : spec.denoisers) d.emplace_back(denoiser_name(k));
  j["denoisers"] = d;
  j["lp"] = {{"l", spec.lp.l},
             {"beta", spec.lp.beta},
             {"bandwidth_const", spec.lp.bandwidth_const},
             {"kernel", spec.lp.kernel},
             {"min_eig_threshold", spec.lp.min_eig_threshold}};
  if (spec.lp.bandwidth) j["lp"]["bandwidth"] = *spec.lp.bandwidth;
  j["knn"] = {{"k", spec.knn.k}, {"auto_rule", spec.knn.auto_rule}};
  j["qi_degree"] = spec.qi_degree;
  j["output_dir"] = spec.output_dir;
  j["jobs"] = spec.jobs;
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base) {
  if (!j.is_object()) throw InvalidArgument("experiment config must be a JSON object");
  static const std::set<std::string> top = {"function_id", "sigma", "n_list",    "seeds",      "denoisers",
                                            "lp",          "knn",   "qi_degree", "output_dir", "jobs"};
  static const std::set<std::string> lp_keys = {"l", "beta", "bandwidth_const", "bandwidth", "kernel",
                                                "min_eig_threshold"};
  static const std::set<std::string> knn_keys = {"k", "auto_rule"};
  const auto check_keys = [](const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.count(key)) throw InvalidArgument("unknown config key '" + where + key + "'");
    }
  };
  check_keys(j, top, "");
  try {
    if (j.contains("function_id")) base.function_id = j.at("function_id").get<std::string>();
    if (j.contains("sigma")) base.sigma = j.at("sigma").get<double>();
    if (j.contains("n_list")) base.n_list = j.at("n_list").get<std::vector<Eigen::Index>>();
    if (j.contains("seeds")) base.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("denoisers")) {
      base.denoisers.clear();
      for (const auto& d : j.at("denoisers")) base.denoisers.push_back(parse_denoiser(d.get<std::string>()));
    }
    if (j.contains("lp")) {
      const auto& lp = j.at("lp");
      check_keys(lp, lp_keys, "lp.");
      if (lp.contains("l")) base.lp.l = lp.at("l").get<int>();
      if (lp.contains("beta")) base.lp.beta = lp.at("beta").get<double>();
      if (lp.contains("bandwidth_const")) base.lp.bandwidth_const = lp.at("bandwidth_const").get<double>();
      if (lp.contains("bandwidth")) base.lp.bandwidth = lp.at("bandwidth").get<double>();
      if (lp.contains("kernel")) base.lp.kernel = lp.at("kernel").get<std::string>();
      if (lp.contains("min_eig_threshold")) base.lp.min_eig_threshold = lp.at("min_eig_threshold").get<double>();
    }
    if (j.contains("knn")) {
      const auto& knn = j.at("knn");
      check_keys(knn, knn_keys, "knn.");
      if (knn.contains("k")) base.knn.k = knn.at("k").get<Eigen::Index>();
      if (knn.contains("auto_rule")) base.knn.auto_rule = knn.at("auto_rule").get<bool>();
    }
    if (j.contains("qi_degree")) base.qi_degree = j.at("qi_degree").get<int>();
    if (j.contains("output_dir")) base.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("jobs")) base.jobs = j.at("jobs").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment config: ") + e.what());
  }
  return base;
}

std::uint64_t derive_noise_seed(std::uint64_t seed, Eigen::Index n) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(n)));
}

DenoisedModulo run_denoiser(const ModuloSamples& samples, DenoiserKind kind, const LpParams& lp, const KnnParams& knn,
                            double* bandwidth_or_k) {
  if (kind == DenoiserKind::lp) {
    const LpConfig cfg = lp.config(samples.grid.size());
    if (bandwidth_or_k) *bandwidth_or_k = cfg.bandwidth_b;
    return denoise(samples, cfg);
  }
  const KnnConfig cfg = knn.config();
  if (bandwidth_or_k) *bandwidth_or_k = static_cast<double>(cfg.resolve(samples.grid.size()));
  return knn_denoise(samples, cfg);
}

ResultRow run_pipeline(const RunSpec& run, PipelineArtifacts* artifacts) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.denoiser = run.denoiser;
  row.n = run.n;
  row.seed = run.seed;
  row.noise_seed = derive_noise_seed(run.seed, run.n);

  const TestFunction f = stage("generate", [&] { return parse_test_function(run.function_id); });
  const UniformGrid grid = stage("generate", [&] { return UniformGrid(run.n); });
  ModuloSamples samples = stage("generate", [&] { return sample_modulo(f, grid, {run.sigma, row.noise_seed}); });
  const Eigen::VectorXd truth = evaluate_on_grid(f, grid);

  DenoisedModulo den = stage("denoise", [&] { return run_denoiser(samples, run.denoiser, run.lp, run.knn, &row.bandwidth_or_k); });
  UnwrappedSamples unw = stage("unwrap", [&] { return unwrap(den.phases, grid); });
  RecoveredFunction rec = stage("recover", [&] { return build_qi(unw, run.qi_degree); });

  row.report = error_report(den.phases, unw.values, truth);
  double rec_max = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    rec_max = std::max(rec_max, std::abs(rec(grid.point(i)) + static_cast<double>(row.report.shift_q) - truth[i]));
  }
  row.recovered_aligned_max = rec_max;
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (artifacts) {
    artifacts->samples = std::move(samples);
    artifacts->truth = truth;
    artifacts->denoised = std::move(den);
    artifacts->unwrapped = std::move(unw);
    artifacts->recovered = std::move(rec);
  }
  return row;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<RunSpec> runs;
  for (auto d : spec.denoisers) {
    for (auto n : spec.n_list) {
      for (auto seed : spec.seeds) {
        runs.push_back({spec.function_id, spec.sigma, n, seed, d, spec.lp, spec.knn, spec.qi_degree});
      }
    }
  }

  std::vector<ResultRow> rows(runs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        rows[i] = run_pipeline(runs[i]);
      } catch (const PipelineError& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        ResultRow r;
        r.denoiser = runs[i].denoiser;
        r.n = runs[i].n;
        r.seed = runs[i].seed;
        r.noise_seed = derive_noise_seed(runs[i].seed, runs[i].n);
        r.report = {nan, nan, nan, nan, 0};
        r.recovered_aligned_max = nan;
        r.bandwidth_or_k = nan;
        r.status = e.stage() + ":" + e.kind();
        rows[i] = r;
      }
    }
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tuple(static_cast<int>(a.denoiser), a.n, a.seed) < std::tuple(static_cast<int>(b.denoiser), b.n, b.seed);
  });
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::pair<int, Eigen::Index>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{static_cast<int>(r.denoiser), r.n}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow s;
    s.denoiser = static_cast<DenoiserKind>(key.first);
    s.n = key.second;
    std::vector<double> wr, wm, ar, am, rm;
    for (const ResultRow* r : members) {
      if (r->status != "ok") {
        ++s.runs_failed;
        continue;
      }
      ++s.runs_ok;
      wr.push_back(r->report.wrap_rmse);
      wm.push_back(r->report.wrap_max);
      ar.push_back(r->report.aligned_rmse);
      am.push_back(r->report.aligned_max);
      rm.push_back(r->recovered_aligned_max);
    }
    s.wrap_rmse = stat_of(wr);
    s.wrap_max = stat_of(wm);
    s.aligned_rmse = stat_of(ar);
    s.aligned_max = stat_of(am);
    s.recovered_aligned_max = stat_of(rm);
    out.push_back(s);
  }
  return out;
}

std::string rows_csv(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  metadata_block(out, spec);
  out << "denoiser,n,seed,noise_seed,wrap_rmse,wrap_max,aligned_rmse,aligned_max,shift_q,"
         "recovered_aligned_max,bandwidth_or_k,status\n";
  for (const auto& r : rows) {
    out << denoiser_name(r.denoiser) << ',' << r.n << ',' << r.seed << ',' << r.noise_seed << ','
        << format_double(r.report.wrap_rmse) << ',' << format_double(r.report.wrap_max) << ','
        << format_double(r.report.aligned_rmse) << ',' << format_double(r.report.aligned_max) << ','
        << r.report.shift_q << ',' << format_double(r.recovered_aligned_max) << ',' << format_double(r.bandwidth_or_k)
        << ',' << r.status << '\n';
  }
  return out.str();
}

std::string summary_csv(const ExperimentSpec& spec, const std::vector<SummaryRow>& summary) {
  std::ostringstream out;
  metadata_block(out, spec);
  out << "denoiser,n,runs_ok,runs_failed";
  for (const char* m : {"wrap_rmse", "wrap_max", "aligned_rmse", "aligned_max", "recovered_aligned_max"}) {
    out << ',' << m << "_mean," << m << "_std";
  }
  out << '\n';
  for (const auto& s : summary) {
    out << denoiser_name(s.denoiser) << ',' << s.n << ',' << s.runs_ok << ',' << s.runs_failed;
    for (const Stat* st : {&s.wrap_rmse, &s.wrap_max, &s.aligned_rmse, &s.aligned_max, &s.recovered_aligned_max}) {
      out << ',' << format_double(st->mean) << ',' << format_double(st->std);
    }
    out << '\n';
  }
  return out.str();
}

std::string timings_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "denoiser,n,seed,runtime_ms\n";
  for (const auto& r : rows) {
    out << denoiser_name(r.denoiser) << ',' << r.n << ',' << r.seed << ',' << format_double(r.runtime_ms) << '\n';
  }
  return out.str();
}

}  // namespace modrec
