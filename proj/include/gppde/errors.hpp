#ifndef GPPDE_ERRORS_HPP_
#define GPPDE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gppde {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatchError : public Error {
 public:
  DimensionMismatchError(int expected, int got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

class UnsupportedDimensionError : public Error {
 public:
  explicit UnsupportedDimensionError(int dims)
      : Error("unsupported dimension count " + std::to_string(dims) +
              " (supported range is 1..6)") {}
};

class DuplicatePointError : public Error {
 public:
  DuplicatePointError(std::size_t i, std::size_t j)
      : Error("collocation entries " + std::to_string(i) + " and " +
              std::to_string(j) +
              " duplicate the same point/operator pair") {}
};

class DenseCapExceededError : public Error {
 public:
  DenseCapExceededError(std::size_t n, std::size_t cap)
      : Error("system size " + std::to_string(n) + " exceeds dense cap " +
              std::to_string(cap) + "; use the matrix-free path") {}
};

class IllConditionedSystemError : public Error {
 public:
  explicit IllConditionedSystemError(int pivot)
      : Error("symmetric factorization failed at pivot " +
              std::to_string(pivot) + "; system is not positive definite"),
        pivot_index(pivot) {}
  int pivot_index;
};

class StepSizeTooLargeError : public Error {
 public:
  explicit StepSizeTooLargeError(double beta)
      : Error("stochastic dual descent diverged even after step-size "
              "halving; reduce beta below " + std::to_string(beta)) {}
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace gppde

#endif  // GPPDE_ERRORS_HPP_
