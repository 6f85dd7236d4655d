#pragma once

#include <stdexcept>
#include <string>

namespace efista {

/// Operation requested on an operator that does not support it
/// (e.g. DCT diagonalization of an asymmetric PSF).
class UnsupportedOperator : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative numeric procedure failed (non-convergence, singular system).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File I/O or parse failure. The message names the file and, where
/// applicable, the byte offset or line number.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace efista
