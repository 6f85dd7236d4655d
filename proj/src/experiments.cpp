#include "efista/experiments.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "efista/pgm.hpp"
#include "parallel.hpp"

namespace efista {

Image add_awgn(const Image& x, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_awgn: sigma must be >= 0");
  Image out = x;
  if (sigma == 0.0) return out;
  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out.values()) v += sigma * normal(rng);
  return out;
}

namespace {

double smoothstep_edge(double d, double width) {
  // 0 inside (d < 0), 1 outside, with a short linear ramp to avoid aliasing.
  return std::clamp(0.5 + d / width, 0.0, 1.0);
}

double disk(double u, double v, double cu, double cv, double r, double px) {
  return 1.0 - smoothstep_edge(std::hypot(u - cu, v - cv) - r, px);
}

double box(double u, double v, double u0, double v0, double u1, double v1) {
  return (u >= u0 && u < u1 && v >= v0 && v < v1) ? 1.0 : 0.0;
}

}  // namespace

Image synthetic_image(std::string_view kind, int size) {
  if (size < 8) throw std::invalid_argument("synthetic_image: size must be >= 8");
  const double pi = std::numbers::pi;
  const double px = 1.0 / size;
  std::function<double(double, double)> scene;
  if (kind == "shapes") {
    scene = [=](double u, double v) {
      double s = 0.25 + 0.35 * u;
      s = s + (0.85 - s) * box(u, v, 0.12, 0.18, 0.45, 0.62);
      s = s + (0.08 - s) * disk(u, v, 0.70, 0.32, 0.17, px);
      s = s + (0.60 - s) * box(u, v, 0.55, 0.65, 0.90, 0.88);
      return s;
    };
  } else if (kind == "disks") {
    scene = [=](double u, double v) {
      double s = 0.5 + 0.3 * std::cos(2 * pi * std::hypot(u - 0.5, v - 0.5));
      const double cs[5][4] = {{0.25, 0.25, 0.12, 0.95},
                               {0.72, 0.28, 0.09, 0.05},
                               {0.30, 0.72, 0.16, 0.15},
                               {0.70, 0.70, 0.14, 0.80},
                               {0.50, 0.50, 0.05, 1.00}};
      for (const auto& c : cs) s = s + (c[3] - s) * disk(u, v, c[0], c[1], c[2], px);
      return s;
    };
  } else if (kind == "texture") {
    scene = [=](double u, double v) {
      double s = 0.5 + 0.25 * std::sin(2 * pi * (6 * u + 2 * v));
      if (u > 0.5) s = 0.5 + 0.2 * std::sin(2 * pi * 14 * v) * std::cos(2 * pi * 3 * u);
      if (v > 0.6 && u < 0.5) s = 0.15 + 0.7 * ((static_cast<int>(u * 16) + static_cast<int>(v * 16)) % 2);
      return s;
    };
  } else if (kind == "ramp") {
    scene = [=](double u, double v) {
      double s = 0.2 + 0.6 * u * v + 0.15 * std::exp(-40 * ((u - 0.3) * (u - 0.3) + (v - 0.6) * (v - 0.6)));
      if (u + 0.5 * v > 0.9) s += 0.25;
      return s;
    };
  } else if (kind == "mix") {
    scene = [=](double u, double v) {
      double s = 0.3 + 0.4 * v;
      s = s + (0.9 - s) * disk(u, v, 0.35, 0.35, 0.2, px);
      s += 0.12 * std::sin(2 * pi * 10 * u) * box(u, v, 0.55, 0.1, 0.95, 0.45);
      for (int line = 0; line < 4; ++line)
        s = s + (0.05 - s) * box(u, v, 0.1 + 0.05 * line, 0.7, 0.1 + 0.05 * line + 0.012, 0.95);
      return s;
    };
  } else {
    throw std::invalid_argument("unknown synthetic image kind '" + std::string(kind) + "'");
  }
  Image img(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      img(r, c) = std::clamp(scene((c + 0.5) * px, (r + 0.5) * px), 0.0, 1.0);
  return img;
}

Image load_test_image(const std::string& id, int synthetic_size) {
  constexpr std::string_view prefix = "synthetic:";
  if (id.starts_with(prefix)) return synthetic_image(std::string_view(id).substr(prefix.size()), synthetic_size);
  return read_pgm(id);
}

std::string image_label(const std::string& id) {
  if (id.starts_with("synthetic:")) return "synthetic-" + id.substr(10);
  return std::filesystem::path(id).stem().string();
}

Scenario make_scenario(const std::string& image_id, double noise_sigma, int K) {
  Scenario s;
  s.image_id = image_label(image_id);
  s.truth = load_test_image(image_id);
  s.noise_sigma = noise_sigma;
  s.K = K;
  if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  return s;
}

Image observe(const Scenario& s, int trial) {
  const Psf psf = make_gaussian_psf(s.psf.size, s.psf.sigma);
  return add_awgn(blur_apply(psf, s.truth), s.noise_sigma, s.seed + static_cast<std::uint64_t>(trial));
}

SolverConfig solver_config(const Scenario& s, Variant v, int iterations, int n) {
  SolverConfig cfg;
  cfg.variant = v;
  cfg.eta = s.eta;
  cfg.lambda = s.lambda();
  cfg.n = n;
  cfg.p = v == Variant::Efista ? s.p : std::nullopt;
  cfg.max_iters = iterations;
  cfg.wavelet_levels = s.wavelet_levels;
  cfg.record_time = s.record_time;
  return cfg;
}

namespace {

void validate(const Scenario& s) {
  if (s.trials < 1) throw std::invalid_argument("scenario needs at least one trial");
  if (s.truth.empty()) throw std::invalid_argument("scenario '" + s.image_id + "' has no image");
  if (s.iter_divisor < 1) throw std::invalid_argument("iteration divisor must be >= 1");
}

bool weighted(Variant v) { return v == Variant::Ifista || v == Variant::Efista; }

}  // namespace

CurveSet run_curve(const Scenario& s, Variant v, int n, int iterations, std::optional<double> p) {
  validate(s);
  const Psf psf = make_gaussian_psf(s.psf.size, s.psf.sigma);
  SolverConfig cfg = solver_config(s, v, iterations, weighted(v) ? n : 1);
  if (p) cfg.p = p;

  CurveSet out;
  out.variant = v;
  out.n = cfg.variant == Variant::Ista || cfg.variant == Variant::Fista ? 1 : n;
  out.trials.resize(s.trials);
  out.status.resize(s.trials);
  std::vector<EffectiveParams> params(s.trials);
  detail::parallel_for(static_cast<std::size_t>(s.trials), [&](std::size_t t) {
    const Image b = observe(s, static_cast<int>(t));
    const Problem problem = make_problem(psf, b, cfg);
    SolveResult r = run_solver(cfg, problem, b, &s.truth);
    out.trials[t] = std::move(r.trace);
    out.status[t] = r.status;
    params[t] = r.params;
  });
  out.p = params.front().p;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.mean_objective.assign(iterations, nan);
  out.mean_psnr.assign(iterations, nan);
  for (int k = 0; k < iterations; ++k) {
    double f = 0.0, q = 0.0;
    bool complete = true;
    for (const auto& tr : out.trials) {
      if (static_cast<int>(tr.records.size()) <= k) {
        complete = false;
        break;
      }
      f += tr.records[k].objective;
      q += tr.records[k].psnr;
    }
    if (!complete) break;
    out.mean_objective[k] = f / s.trials;
    out.mean_psnr[k] = q / s.trials;
  }
  return out;
}

std::vector<CurveSet> run_convergence_test(const Scenario& s, const std::vector<Variant>& variants,
                                           const std::vector<int>& n_values, int iterations) {
  std::vector<CurveSet> out;
  for (Variant v : variants) {
    if (weighted(v)) {
      for (int n : n_values) out.push_back(run_curve(s, v, n, iterations));
    } else {
      out.push_back(run_curve(s, v, 1, iterations));
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string convergence_csv_name(const CurveSet& curves) {
  std::string name = "curves_" + std::string(to_string(curves.variant));
  if (curves.n > 1) name += "_n" + std::to_string(curves.n);
  return name + ".csv";
}

void write_convergence_csv(std::ostream& out, const CurveSet& c) {
  out << "iter,variant,n,p,trial,objective,psnr,seconds\n";
  const std::string prefix = std::string(to_string(c.variant)) + "," + std::to_string(c.n) + "," +
                             format_double(c.p) + ",";
  for (std::size_t t = 0; t < c.trials.size(); ++t) {
    for (const auto& r : c.trials[t].records) {
      out << r.iter << ',' << prefix << t << ',' << format_double(r.objective) << ','
          << format_double(r.psnr) << ',' << format_double(r.seconds) << '\n';
    }
  }
  for (std::size_t k = 0; k < c.mean_objective.size(); ++k) {
    if (std::isnan(c.mean_objective[k])) break;
    out << k + 1 << ',' << prefix << -1 << ',' << format_double(c.mean_objective[k]) << ','
        << format_double(c.mean_psnr[k]) << ",0\n";
  }
}

std::vector<SweepPoint> run_p_sweep(const Scenario& s, int n, const std::vector<double>& p_values,
                                    int probe_iter, int iterations) {
  if (probe_iter < 1 || probe_iter > iterations)
    throw std::invalid_argument("probe iteration must lie in [1, iterations]");
  std::vector<SweepPoint> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    const CurveSet c = run_curve(s, Variant::Efista, n, iterations, p);
    IterationTrace mean;
    bool blew_up = false;
    for (int k = 0; k < iterations; ++k) {
      if (std::isnan(c.mean_objective[k])) {
        blew_up = true;
        break;
      }
      mean.records.push_back({k + 1, c.mean_objective[k], 0, 0, 0, 0});
    }
    out.push_back({p, c.mean_objective[probe_iter - 1], blew_up || objective_rising(mean)});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "p,objective,diverging\n";
  for (const auto& pt : points)
    out << format_double(pt.p) << ',' << format_double(pt.objective) << ',' << (pt.rising ? 1 : 0)
        << '\n';
}

const TableRow* ResultTable::find(std::string_view image, double sigma,
                                  std::string_view algorithm) const {
  for (const auto& r : rows)
    if (r.image == image && r.sigma == sigma && r.algorithm == algorithm) return &r;
  return nullptr;
}

ResultTable run_psnr_table(const std::vector<Scenario>& scenarios) {
  ResultTable table;
  for (const Scenario& s : scenarios) {
    validate(s);
    const int reduced = std::max(1, s.K / s.iter_divisor);
    const std::pair<Variant, int> runs[] = {
        {Variant::Fista, s.K}, {Variant::Ifista, reduced}, {Variant::Efista, reduced}};
    for (const auto& [variant, iters] : runs) {
      const CurveSet c = run_curve(s, variant, s.n, iters);
      std::vector<double> finals, secs;
      for (const auto& tr : c.trials) {
        if (tr.records.empty()) continue;
        finals.push_back(tr.records.back().psnr);
        secs.push_back(tr.records.back().seconds);
      }
      TableRow row{s.image_id, s.noise_sigma, std::string(to_string(variant)), iters,
                   std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
      if (!finals.empty()) {
        double m = 0.0, t = 0.0;
        for (std::size_t i = 0; i < finals.size(); ++i) {
          m += finals[i];
          t += secs[i];
        }
        m /= finals.size();
        double var = 0.0;
        for (double f : finals) var += (f - m) * (f - m);
        row.psnr_mean = m;
        row.psnr_std = finals.size() > 1 ? std::sqrt(var / (finals.size() - 1)) : 0.0;
        row.secs_mean = t / finals.size();
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

void write_table_csv(std::ostream& out, const ResultTable& table) {
  out << "image,sigma,algorithm,iters,psnr_mean,psnr_std,secs_mean\n";
  for (const auto& r : table.rows)
    out << r.image << ',' << format_double(r.sigma) << ',' << r.algorithm << ',' << r.iters << ','
        << format_double(r.psnr_mean) << ',' << format_double(r.psnr_std) << ','
        << format_double(r.secs_mean) << '\n';
}

void write_table_text(std::ostream& out, const ResultTable& table) {
  std::size_t w = 5;
  for (const auto& r : table.rows) w = std::max(w, r.image.size());
  out << std::left << std::setw(static_cast<int>(w)) << "image" << "  " << std::setw(8) << "sigma"
      << std::setw(8) << "algo" << std::right << std::setw(6) << "iters" << std::setw(10) << "PSNR"
      << std::setw(8) << "std" << std::setw(10) << "secs" << '\n';
  for (const auto& r : table.rows) {
    std::ostringstream sigma;
    sigma << r.sigma;
    out << std::left << std::setw(static_cast<int>(w)) << r.image << "  " << std::setw(8)
        << sigma.str() << std::setw(8) << r.algorithm << std::right << std::setw(6) << r.iters
        << std::fixed << std::setprecision(2) << std::setw(10) << r.psnr_mean << std::setw(8)
        << r.psnr_std << std::setprecision(3) << std::setw(10) << r.secs_mean << '\n'
        << std::defaultfloat;
  }
}

}  // namespace efista
