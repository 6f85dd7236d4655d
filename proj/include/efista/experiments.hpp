#pragma once

// Deblurring benchmark harness: noisy observations, convergence curves,
// threshold-scale sweeps and PSNR tables, with CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efista/image.hpp"
#include "efista/linop.hpp"
#include "efista/metrics.hpp"
#include "efista/solvers.hpp"

namespace efista {

/// x + sigma * g with g i.i.d. standard normal drawn from a seeded
/// mt19937 / Boost normal_distribution stream (reproducible per seed).
Image add_awgn(const Image& x, double sigma, std::uint64_t seed);

/// Deterministic piecewise-smooth test scenes in [0, 1]: "shapes", "disks",
/// "texture", "ramp", "mix". Throws std::invalid_argument for other kinds.
Image synthetic_image(std::string_view kind, int size = 256);

/// "synthetic:<kind>" generates a scene; anything else is a PGM path
/// (IoError naming the file if it cannot be read).
Image load_test_image(const std::string& id, int synthetic_size = 256);

/// Short name for an image id: "synthetic:mix" -> "synthetic-mix",
/// "/a/b/camera.pgm" -> "camera".
std::string image_label(const std::string& id);

struct PsfSpec {
  int size = 7;
  double sigma = 4.0;
};

struct Scenario {
  std::string image_id;
  Image truth;
  PsfSpec psf;
  double noise_sigma = 1e-2;
  std::optional<double> lambda_override;  ///< default 10 sigma^2
  int K = 45;                             ///< FISTA iteration budget
  int iter_divisor = 3;                   ///< IFISTA/EFISTA run K / iter_divisor
  int trials = 10;
  std::uint64_t seed = 0;                 ///< trial t uses noise seed `seed + t`
  double eta = 1.0;
  int n = 8;
  std::optional<double> p;                ///< EFISTA threshold scale override
  int wavelet_levels = 8;
  bool record_time = true;

  double lambda() const { return lambda_override.value_or(10.0 * noise_sigma * noise_sigma); }
};

/// Loads the image (labelled with image_label) and validates trial count and shape.
Scenario make_scenario(const std::string& image_id, double noise_sigma, int K);

/// Blurred, noisy observation for one trial.
Image observe(const Scenario& s, int trial);

SolverConfig solver_config(const Scenario& s, Variant v, int iterations, int n);

struct RunSpec {
  Variant variant;
  int n;
};

/// One configuration run across all trials of a scenario.
struct CurveSet {
  Variant variant = Variant::Fista;
  int n = 1;
  double p = 1.0;
  std::vector<IterationTrace> trials;
  std::vector<RunStatus> status;
  std::vector<double> mean_objective;  ///< per iteration; NaN where a trial stopped early
  std::vector<double> mean_psnr;

  double mean_objective_at(int iter) const { return mean_objective.at(iter - 1); }
};

/// Runs `iterations` steps of each variant (weighted variants once per n in
/// n_values) for every trial and averages across trials.
std::vector<CurveSet> run_convergence_test(const Scenario& s, const std::vector<Variant>& variants,
                                           const std::vector<int>& n_values, int iterations);

CurveSet run_curve(const Scenario& s, Variant v, int n, int iterations,
                   std::optional<double> p = std::nullopt);

/// Schema: iter,variant,n,p,trial,objective,psnr,seconds. Trial rows first,
/// then across-trial mean rows with trial = -1.
void write_convergence_csv(std::ostream& out, const CurveSet& curves);
std::string convergence_csv_name(const CurveSet& curves);

struct SweepPoint {
  double p = 1.0;
  double objective = 0.0;  ///< mean objective at the probe iteration
  bool rising = false;     ///< mean curve ends above its minimum (objective_rising)
};

/// EFISTA with order n for each p; `iterations` must be >= probe_iter.
std::vector<SweepPoint> run_p_sweep(const Scenario& s, int n, const std::vector<double>& p_values,
                                    int probe_iter, int iterations);
/// Schema: p,objective,diverging.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

struct TableRow {
  std::string image;
  double sigma = 0.0;
  std::string algorithm;
  int iters = 0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double secs_mean = 0.0;
};

struct ResultTable {
  std::vector<TableRow> rows;
  const TableRow* find(std::string_view image, double sigma, std::string_view algorithm) const;
};

/// FISTA at K iterations, IFISTA and EFISTA at K / iter_divisor, PSNR of
/// the final iterate averaged over trials.
ResultTable run_psnr_table(const std::vector<Scenario>& scenarios);
/// Schema: image,sigma,algorithm,iters,psnr_mean,psnr_std,secs_mean.
void write_table_csv(std::ostream& out, const ResultTable& table);
void write_table_text(std::ostream& out, const ResultTable& table);

/// Full-precision (17 significant digits) decimal text; "nan" for NaN.
std::string format_double(double v);

}  // namespace efista
