#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "efista/experiments.hpp"
#include "efista/metrics.hpp"
#include "helpers.hpp"

using namespace efista;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

Scenario tiny_scenario(double sigma, int trials) {
  Scenario s = make_scenario("synthetic:mix", sigma, 9);
  s.truth = synthetic_image("mix", 64);
  s.trials = trials;
  s.wavelet_levels = 6;
  s.record_time = false;
  return s;
}

}  // namespace

TEST_CASE("awgn statistics") {
  const Image x = test::constant_image(256, 256, 0.5);
  CHECK(add_awgn(x, 0.0, 1) == x);
  const Image y = add_awgn(x, 0.1, 42);
  const double N = 65536.0;
  double mean = 0.0;
  for (double v : y.values()) mean += v - 0.5;
  mean /= N;
  double var = 0.0;
  for (double v : y.values()) var += (v - 0.5 - mean) * (v - 0.5 - mean);
  const double sd = std::sqrt(var / (N - 1));
  CHECK(std::abs(mean) <= 4 * 0.1 / std::sqrt(N));
  CHECK(std::abs(sd - 0.1) <= 0.005);
  CHECK(add_awgn(x, 0.1, 42) == y);
  CHECK_FALSE(add_awgn(x, 0.1, 43) == y);
}

TEST_CASE("psnr") {
  const Image x = test::random_image(16, 16, 1);
  CHECK(psnr(x, x) == kPsnrCap);
  Image e = x;
  for (auto& v : e.values()) v += 0.1;
  CHECK(psnr(e, x) == doctest::Approx(20.0));
  const Image y = test::random_image(16, 16, 2);
  double mse = 0.0;
  for (std::size_t i = 0; i < 256; ++i) mse += std::pow(x.values()[i] - y.values()[i], 2);
  mse /= 256.0;
  CHECK(psnr(y, x) == doctest::Approx(10 * std::log10(1.0 / mse)).epsilon(1e-12));
}

TEST_CASE("synthetic scenes") {
  for (const char* kind : {"shapes", "disks", "texture", "ramp", "mix"}) {
    const Image img = synthetic_image(kind, 64);
    CHECK(img.width() == 64);
    for (double v : img.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(synthetic_image(kind, 64) == img);
  }
  CHECK_THROWS_AS(synthetic_image("noise", 64), std::invalid_argument);
  CHECK(image_label("synthetic:mix") == "synthetic-mix");
  CHECK(image_label("/a/b/camera.pgm") == "camera");
}

TEST_CASE("observations are seeded per trial") {
  const Scenario s = tiny_scenario(1e-2, 2);
  CHECK(observe(s, 0) == observe(s, 0));
  CHECK_FALSE(observe(s, 0) == observe(s, 1));
  CHECK(s.lambda() == doctest::Approx(1e-3));
}

TEST_CASE("convergence csv") {
  Scenario s = tiny_scenario(1e-2, 2);
  const CurveSet empty = run_curve(s, Variant::Fista, 1, 0);
  std::ostringstream e;
  write_convergence_csv(e, empty);
  CHECK(e.str() == "iter,variant,n,p,trial,objective,psnr,seconds\n");

  const auto sets = run_convergence_test(s, {Variant::Fista, Variant::Efista}, {4, 8}, 5);
  REQUIRE(sets.size() == 3);
  CHECK(convergence_csv_name(sets[0]) == "curves_FISTA.csv");
  CHECK(convergence_csv_name(sets[2]) == "curves_EFISTA_n8.csv");
  std::ostringstream out;
  write_convergence_csv(out, sets[1]);
  CHECK(count_lines(out.str()) == 1 + 2 * 5 + 5);
  std::ostringstream again;
  write_convergence_csv(again, run_convergence_test(s, {Variant::Fista, Variant::Efista}, {4, 8}, 5)[1]);
  CHECK(again.str() == out.str());
}

TEST_CASE("noiseless FISTA decreases monotonically") {
  Scenario s = tiny_scenario(0.0, 1);
  const CurveSet c = run_curve(s, Variant::Fista, 1, 40);
  for (int k = 1; k < 40; ++k) CHECK(c.mean_objective[k] <= c.mean_objective[k - 1] * (1 + 1e-9));
}

TEST_CASE("p sweep") {
  Scenario s = tiny_scenario(1e-2, 1);
  const auto pts = run_p_sweep(s, 8, {1.0, 4.0}, 3, 5);
  REQUIRE(pts.size() == 2);
  const CurveSet ifista = run_curve(s, Variant::Ifista, 8, 5);
  CHECK(pts[0].objective == ifista.mean_objective_at(3));
  std::ostringstream out;
  write_sweep_csv(out, pts);
  CHECK(out.str().rfind("p,objective,diverging\n", 0) == 0);
  CHECK(count_lines(out.str()) == 3);
  CHECK_THROWS(run_p_sweep(s, 8, {1.0}, 6, 5));
}

TEST_CASE("psnr table") {
  std::vector<Scenario> sc{tiny_scenario(1e-2, 2), tiny_scenario(1e-3, 2)};
  sc[1].K = 12;
  const ResultTable t = run_psnr_table(sc);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.find("synthetic-mix", 1e-2, "FISTA")->iters == 9);
  CHECK(t.find("synthetic-mix", 1e-2, "EFISTA")->iters == 3);
  CHECK(t.find("synthetic-mix", 1e-3, "IFISTA")->iters == 4);
  CHECK(t.find("nope", 1e-2, "FISTA") == nullptr);
  std::ostringstream csv;
  write_table_csv(csv, t);
  CHECK(count_lines(csv.str()) == 7);

  // Noiseless: more iterations, better reconstruction.
  Scenario clean = tiny_scenario(0.0, 1);
  clean.lambda_override = 0.0;
  double last = -1.0;
  for (int K : {5, 20, 80}) {
    clean.K = K;
    const double p = run_psnr_table({clean}).find("synthetic-mix", 0.0, "FISTA")->psnr_mean;
    CHECK(p > last);
    last = p;
  }
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("Test 1 shape on the camera image") {
  const std::string cam = std::string(EFISTA_DATA_DIR) + "/camera.pgm";
  Scenario s = make_scenario(cam, 1e-2, 50);
  s.trials = 2;
  s.record_time = false;
  const CurveSet e = run_curve(s, Variant::Efista, 8, 50);
  for (int k = 15; k < 50; ++k) CHECK(e.mean_objective[k] <= e.mean_objective[k - 1] * (1 + 1e-3));
  const CurveSet i = run_curve(s, Variant::Ifista, 8, 50);
  const auto best = std::min_element(i.mean_objective.begin(), i.mean_objective.end()) - i.mean_objective.begin();
  CHECK(best < 49);
  for (auto k = best + 1; k < 50; ++k) CHECK(i.mean_objective[k] > i.mean_objective[k - 1]);
}
