#pragma once

#include <stdexcept>
#include <string>

namespace wfpca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(int order)
      : Error("unsupported coiflet order " + std::to_string(order)) {}
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DyadicGridError : public Error {
 public:
  explicit DyadicGridError(long long p)
      : Error("grid size " + std::to_string(p) + " is not a power of two") {}
};

class NotAvailable : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class RegularityViolation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class EmptyTable : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline bool is_dyadic(long long p) { return p >= 1 && (p & (p - 1)) == 0; }

inline int log2_exact(long long p) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  int j = 0;
  while ((1LL << j) < p) ++j;
  return j;
}

}  // namespace wfpca
