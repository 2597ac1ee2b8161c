#pragma once

#include <cstddef>
#include <vector>

#include "tdec/matrix.hpp"

namespace tdec {

struct JacobiOptions {
  // Stop when the off-diagonal Frobenius norm drops below this fraction of
  // the full Frobenius norm.
  double relative_tolerance = 1e-12;
  std::size_t max_sweeps = 100;
};

struct JacobiResult {
  std::vector<double> eigenvalues;  // diagonal order, unsorted
  std::size_t sweeps = 0;
};

// Cyclic Jacobi eigenvalues of a symmetric matrix. Throws NumericalError if
// the iteration cap is reached and ValueError on non-square/asymmetric input.
JacobiResult jacobi_eigenvalues(Matrix a, const JacobiOptions& options = {});

}  // namespace tdec
