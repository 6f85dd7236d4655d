#include "efista/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "efista/errors.hpp"

namespace efista {
namespace {

class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::string& origin)
      : bytes_(bytes), origin_(origin) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(origin_ + ": " + what + " at byte offset " + std::to_string(pos_));
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* field) {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) fail(std::string("oversized ") + field);
      ++pos_;
    }
    if (pos_ == begin) fail(std::string("expected ") + field);
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  const std::string& bytes_;
  const std::string& origin_;
  std::size_t pos_ = 0;
};

}  // namespace

Image parse_pgm(const std::string& bytes, const std::string& origin) {
  HeaderReader in(bytes, origin);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    in.fail("missing P2/P5 magic number");
  const bool binary = bytes[1] == '5';
  in.advance(2);
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  const long maxval = in.read_uint("maxval");
  if (width < 1 || height < 1) in.fail("non-positive dimensions");
  if (maxval < 1 || maxval > 65535) in.fail("maxval outside [1, 65535]");

  std::vector<double> values(static_cast<std::size_t>(width) * height);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[in.pos()])))
      in.fail("expected whitespace before raster");
    in.advance(1);
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() - in.pos() < values.size() * bpp) in.fail("truncated raster");
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + in.pos());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const long v = bpp == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
      if (v > maxval) {
        in.advance(i * bpp);
        in.fail("sample exceeds maxval");
      }
      values[i] = v * scale;
    }
  } else {
    for (double& value : values) {
      const long v = in.read_uint("sample");
      if (v > maxval) in.fail("sample exceeds maxval");
      value = v * scale;
    }
  }
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

Image read_pgm(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path + ": cannot open file");
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes, path);
}

std::string encode_pgm(const Image& img, int maxval, bool ascii) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("PGM maxval must be in [1, 65535]");
  std::ostringstream out;
  out << (ascii ? "P2" : "P5") << '\n' << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
  auto quantize = [maxval](double v) {
    return static_cast<long>(std::round(std::clamp(v, 0.0, 1.0) * maxval));
  };
  const auto vals = img.values();
  if (ascii) {
    for (int r = 0; r < img.height(); ++r) {
      for (int c = 0; c < img.width(); ++c) out << (c ? " " : "") << quantize(img(r, c));
      out << '\n';
    }
  } else {
    for (double v : vals) {
      const long q = quantize(v);
      if (maxval > 255) out.put(static_cast<char>(q >> 8));
      out.put(static_cast<char>(q & 0xff));
    }
  }
  return out.str();
}

void write_pgm(const std::string& path, const Image& img, int maxval, bool ascii) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError(path + ": cannot open file for writing");
  file << encode_pgm(img, maxval, ascii);
  if (!file) throw IoError(path + ": write failed");
}

}  // namespace efista
