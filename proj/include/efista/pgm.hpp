#pragma once

#include <string>

#include "efista/image.hpp"

namespace efista {

/// Reads a P2 (ASCII) or P5 (binary) PGM with maxval <= 65535 and
/// normalizes pixels to [0, 1]. Throws IoError naming the file and the
/// byte offset of a malformed header or truncated payload.
Image read_pgm(const std::string& path);

/// Clamps to [0, 1], scales by maxval and rounds half away from zero.
/// Writes P5 unless `ascii` is set.
void write_pgm(const std::string& path, const Image& img, int maxval = 255, bool ascii = false);

/// Parses PGM bytes already in memory; `origin` names the source in errors.
Image parse_pgm(const std::string& bytes, const std::string& origin);
std::string encode_pgm(const Image& img, int maxval = 255, bool ascii = false);

}  // namespace efista
