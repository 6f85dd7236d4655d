#include "efista/run_config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "efista/errors.hpp"

namespace efista {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

int to_positive_int(const std::string& s) {
  const long long v = to_int(s);
  if (v < 1 || v > 1'000'000'000) throw std::invalid_argument("expected a positive integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::string resolve(const std::string& id, const std::string& base_dir) {
  if (id.starts_with("synthetic:") || base_dir.empty()) return id;
  const std::filesystem::path p(id);
  return p.is_absolute() ? id : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  const auto range = split(text, ':');
  if (range.size() == 3 && text.find(',') == std::string::npos) {
    const double start = to_double(range[0]);
    const double step = to_double(range[1]);
    const double stop = to_double(range[2]);
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad range '" + text + "'");
    const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  return out;
}

int default_k_budget(double noise_sigma) {
  if (std::fabs(noise_sigma - 1e-2) < 1e-12) return 45;
  if (std::fabs(noise_sigma - 1e-3) < 1e-12) return 180;
  return 50;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin,
                           const std::string& base_dir) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& what) -> void {
      throw IoError(origin + ":" + std::to_string(line_no) + ": " + what);
    };
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "image") {
        cfg.images = {resolve(value, base_dir)};
      } else if (key == "images") {
        cfg.images.clear();
        for (const auto& id : split(value, ',')) cfg.images.push_back(resolve(id, base_dir));
      } else if (key == "observed") {
        cfg.observed = resolve(value, base_dir);
      } else if (key == "psf_size") {
        cfg.psf_size = to_positive_int(value);
      } else if (key == "psf_sigma") {
        cfg.psf_sigma = to_double(value);
      } else if (key == "noise_sigma" || key == "noise_sigmas") {
        cfg.noise_sigmas = parse_number_list(value);
      } else if (key == "k_budgets" || key == "K") {
        cfg.k_budgets.clear();
        for (const auto& v : split(value, ',')) cfg.k_budgets.push_back(to_positive_int(v));
      } else if (key == "variant" || key == "variants") {
        cfg.variants.clear();
        for (const auto& v : split(value, ',')) cfg.variants.push_back(parse_variant(v));
      } else if (key == "n" || key == "n_values") {
        cfg.n_values.clear();
        for (const auto& v : split(value, ',')) cfg.n_values.push_back(to_positive_int(v));
      } else if (key == "p") {
        if (value == "auto") cfg.p.reset();
        else cfg.p = to_double(value);
      } else if (key == "p_values") {
        cfg.p_values = parse_number_list(value);
      } else if (key == "eta") {
        cfg.eta = to_double(value);
      } else if (key == "lambda") {
        if (value == "rule") cfg.lambda.reset();
        else cfg.lambda = to_double(value);
      } else if (key == "iterations") {
        cfg.iterations = static_cast<int>(to_int(value));
        if (cfg.iterations < 0) fail("iterations must be >= 0");
      } else if (key == "iter_divisor") {
        cfg.iter_divisor = to_positive_int(value);
      } else if (key == "trials") {
        cfg.trials = to_positive_int(value);
      } else if (key == "seed") {
        const long long s = to_int(value);
        if (s < 0) fail("seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "probe_iter") {
        cfg.probe_iter = to_positive_int(value);
      } else if (key == "levels") {
        cfg.levels = to_positive_int(value);
      } else if (key == "spectral_path") {
        cfg.spectral_path = to_bool(value);
      } else if (key == "timing") {
        cfg.timing = to_bool(value);
      } else if (key == "output_dir") {
        cfg.output_dir = resolve(value, base_dir);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail("key '" + key + "': " + e.what());
    }
    cfg.keys_set.push_back(key);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError(path + ": cannot open config file");
  const std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_run_config(text, path, std::filesystem::path(path).parent_path().string());
}

}  // namespace efista
