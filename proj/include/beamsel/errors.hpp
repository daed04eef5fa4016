#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beamsel {

// A Hermitian factorization hit a non-positive pivot: the matrix is singular
// (or indefinite) to working precision.
class SingularGram : public std::runtime_error {
 public:
  SingularGram(std::size_t pivot_index, double pivot_value)
      : std::runtime_error("singular Gram matrix: pivot " +
                           std::to_string(pivot_index) + " = " +
                           std::to_string(pivot_value)),
        pivot_index_(pivot_index),
        pivot_value_(pivot_value) {}

  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot_value() const noexcept { return pivot_value_; }

 private:
  std::size_t pivot_index_;
  double pivot_value_;
};

// An iterative routine exceeded its iteration cap.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The greedy loop ran out of rank-preserving removals before reaching K.
class InfeasibleSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beamsel
