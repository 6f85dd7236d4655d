#include "efista/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "efista/errors.hpp"
#include "efista/experiments.hpp"
#include "efista/pgm.hpp"

namespace efista {
namespace fs = std::filesystem;

namespace {

bool has_key(const RunConfig& cfg, const std::string& key) {
  return std::find(cfg.keys_set.begin(), cfg.keys_set.end(), key) != cfg.keys_set.end();
}

// All inputs are checked before any computation starts.
fs::path prepare(const RunConfig& cfg, const CommandOptions& opts) {
  for (const auto& id : cfg.images)
    if (!id.starts_with("synthetic:") && !fs::is_regular_file(id))
      throw IoError(id + ": image file not found");
  if (!cfg.observed.empty() && !fs::is_regular_file(cfg.observed))
    throw IoError(cfg.observed + ": observed image file not found");
  const fs::path dir = opts.out_dir.value_or(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(dir.string() + ": cannot create output directory");
  return dir;
}

std::uint64_t seed_of(const RunConfig& cfg, const CommandOptions& opts) {
  return opts.seed.value_or(cfg.seed);
}

Scenario scenario_from(const RunConfig& cfg, const CommandOptions& opts, const std::string& image,
                       double sigma, int K) {
  Scenario s = make_scenario(image, sigma, K);
  s.psf = {cfg.psf_size, cfg.psf_sigma};
  s.lambda_override = cfg.lambda;
  s.iter_divisor = cfg.iter_divisor;
  s.trials = cfg.trials;
  s.seed = seed_of(cfg, opts);
  s.eta = cfg.eta;
  s.n = cfg.n_values.front();
  s.p = cfg.p;
  s.wavelet_levels = cfg.levels;
  s.record_time = cfg.timing;
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path.string() + ": cannot open for writing");
  f << text;
  if (!f) throw IoError(path.string() + ": write failed");
}

}  // namespace

int cmd_deblur(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  if (cfg.images.empty() && cfg.observed.empty())
    throw std::invalid_argument("deblur needs 'image' or 'observed'");
  const fs::path dir = prepare(cfg, opts);
  const double sigma = cfg.noise_sigmas.empty() ? 0.0 : cfg.noise_sigmas.front();
  const Psf psf = make_gaussian_psf(cfg.psf_size, cfg.psf_sigma);

  std::optional<Image> truth;
  if (!cfg.images.empty()) truth = load_test_image(cfg.images.front());
  const Image b = cfg.observed.empty()
                      ? add_awgn(blur_apply(psf, *truth), sigma, seed_of(cfg, opts))
                      : read_pgm(cfg.observed);

  SolverConfig sc;
  sc.variant = cfg.variants.front();
  sc.eta = cfg.eta;
  sc.lambda = cfg.lambda.value_or(10.0 * sigma * sigma);
  sc.n = cfg.n_values.front();
  sc.p = cfg.p;
  sc.max_iters = cfg.iterations;
  sc.wavelet_levels = cfg.levels;
  sc.spectral_path = cfg.spectral_path;
  sc.record_time = cfg.timing;
  const SolveResult r = run_solver(sc, b, psf, b, truth ? &*truth : nullptr);

  CurveSet curves;
  curves.variant = sc.variant;
  curves.n = r.params.n;
  curves.p = r.params.p;
  curves.trials = {r.trace};
  std::ostringstream csv;
  write_convergence_csv(csv, curves);
  write_file(dir / "trace.csv", csv.str());
  write_pgm((dir / "observed.pgm").string(), b);
  write_pgm((dir / "deblurred.pgm").string(), r.x);

  const bool blew_up = r.status == RunStatus::Diverged;
  const bool rising = objective_rising(r.trace);
  if (!opts.quiet)
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << to_string(sc.variant) << " n=" << r.params.n << " p=" << r.params.p
      << " iters=" << r.trace.records.size();
  if (!r.trace.records.empty()) out << " objective=" << r.trace.records.back().objective;
  if (truth) out << " psnr=" << psnr(r.x, *truth) << " input_psnr=" << psnr(b, *truth);
  out << " status=" << (blew_up ? "diverged" : rising ? "diverging" : "ok") << '\n';
  return blew_up || rising ? kExitDiverged : kExitOk;
}

int cmd_curves(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  if (cfg.images.empty()) throw std::invalid_argument("curves needs an 'image'");
  const fs::path dir = prepare(cfg, opts);
  const double sigma = cfg.noise_sigmas.front();
  const Scenario s = scenario_from(cfg, opts, cfg.images.front(), sigma, cfg.iterations);
  const std::vector<Variant> variants =
      has_key(cfg, "variants") || has_key(cfg, "variant")
          ? cfg.variants
          : std::vector<Variant>{Variant::Fista, Variant::Ifista, Variant::Efista};
  const auto sets = run_convergence_test(s, variants, cfg.n_values, cfg.iterations);
  for (const auto& c : sets) {
    std::ostringstream csv;
    write_convergence_csv(csv, c);
    write_file(dir / convergence_csv_name(c), csv.str());
    if (!opts.quiet && !c.mean_objective.empty()) {
      const auto best = std::min_element(c.mean_objective.begin(), c.mean_objective.end());
      out << to_string(c.variant) << " n=" << c.n << " p=" << c.p
          << " final=" << c.mean_objective.back() << " min=" << *best << " @"
          << (best - c.mean_objective.begin()) + 1 << '\n';
    }
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  if (cfg.images.empty()) throw std::invalid_argument("sweep needs 'image' or 'images'");
  const fs::path dir = prepare(cfg, opts);
  const std::vector<double> ps = cfg.p_values.empty() ? parse_number_list("1:0.2:8") : cfg.p_values;
  for (const auto& image : cfg.images) {
    const Scenario s = scenario_from(cfg, opts, image, cfg.noise_sigmas.front(), cfg.iterations);
    const auto points = run_p_sweep(s, cfg.n_values.front(), ps, cfg.probe_iter, cfg.iterations);
    std::ostringstream csv;
    write_sweep_csv(csv, points);
    write_file(dir / ("sweep_" + s.image_id + ".csv"), csv.str());
    if (!opts.quiet) {
      const auto best = std::min_element(points.begin(), points.end(),
                                         [](const auto& a, const auto& b) { return a.objective < b.objective; });
      const auto stable = std::find_if(points.begin(), points.end(), [](const auto& p) { return !p.rising; });
      out << s.image_id << ": argmin p=" << best->p << " objective=" << best->objective;
      if (stable != points.end()) out << " smallest non-diverging p=" << stable->p;
      out << '\n';
    }
  }
  return kExitOk;
}

int cmd_table(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  if (cfg.images.empty() || cfg.noise_sigmas.empty())
    throw std::invalid_argument("table needs at least one image and one noise level");
  if (!cfg.k_budgets.empty() && cfg.k_budgets.size() != cfg.noise_sigmas.size())
    throw std::invalid_argument("k_budgets must have one entry per noise level");
  const fs::path dir = prepare(cfg, opts);
  std::vector<Scenario> scenarios;
  for (std::size_t i = 0; i < cfg.noise_sigmas.size(); ++i) {
    const double sigma = cfg.noise_sigmas[i];
    const int K = cfg.k_budgets.empty() ? default_k_budget(sigma) : cfg.k_budgets[i];
    for (const auto& image : cfg.images) scenarios.push_back(scenario_from(cfg, opts, image, sigma, K));
  }
  const ResultTable table = run_psnr_table(scenarios);
  std::ostringstream csv, text;
  write_table_csv(csv, table);
  write_table_text(text, table);
  write_file(dir / "table.csv", csv.str());
  write_file(dir / "table.txt", text.str());
  if (!opts.quiet) out << text.str();
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proximal-gradient deblurring solvers (ISTA/FISTA/IFISTA/EFISTA) and benchmarks"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "run configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "base noise seed (overrides seed)");
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.fallthrough();
  auto* deblur = app.add_subcommand("deblur", "deblur one image and write the trace");
  auto* curves = app.add_subcommand("curves", "objective vs iteration curves");
  auto* sweep = app.add_subcommand("sweep", "objective at a probe iteration vs p");
  auto* table = app.add_subcommand("table", "PSNR table over images and noise levels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CommandOptions opts;
    if (*out_opt) opts.out_dir = out_dir;
    if (*seed_opt) opts.seed = seed;
    opts.quiet = quiet;
    const RunConfig cfg = load_run_config(config_path);
    if (*deblur) return cmd_deblur(cfg, opts, out);
    if (*curves) return cmd_curves(cfg, opts, out);
    if (*sweep) return cmd_sweep(cfg, opts, out);
    if (*table) return cmd_table(cfg, opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace efista
