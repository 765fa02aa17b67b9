#pragma once

#include "cmvm/core.hpp"

#include <random>

namespace cmvm {

/// Deterministic problem generator: std::mt19937_64, real and imaginary parts
/// drawn uniform in [-1, 1], matrix entries row by row.
class ProblemGenerator {
 public:
  explicit ProblemGenerator(std::uint64_t seed) : engine_(seed) {}

  Complex complex() {
    const double re = dist_(engine_);
    const double im = dist_(engine_);
    return {re, im};
  }

  ComplexMatrix matrix(Index rows, Index cols) {
    ComplexMatrix a(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) a(i, j) = complex();
    }
    return a;
  }

  ComplexVector vector(Index len) {
    ComplexVector x(len);
    for (Index i = 0; i < len; ++i) x(i) = complex();
    return x;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  using Index = Eigen::Index;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

}  // namespace cmvm
