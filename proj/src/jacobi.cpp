#include "tdec/jacobi.hpp"

#include <cmath>
#include <string>

#include "tdec/error.hpp"
#include "tdec/simd/kernels.hpp"

namespace tdec {

namespace {

double off_diagonal_norm2(const Matrix& a) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    const auto before = r.first(i);
    const auto after = r.subspan(i + 1);
    total += simd::dot(before, before) + simd::dot(after, after);
  }
  return total;
}

}  // namespace

JacobiResult jacobi_eigenvalues(Matrix a, const JacobiOptions& options) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ValueError("eigensolver needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(i, j) != a(j, i))
        throw ValueError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");

  const double norm2 = simd::dot(a.data(), a.data());
  const double threshold2 = options.relative_tolerance * options.relative_tolerance * norm2;

  JacobiResult result;
  bool converged = n < 2;
  for (std::size_t sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    if (off_diagonal_norm2(a) <= threshold2) {
      converged = true;
      break;
    }
    ++result.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rows p and q away from the 2x2 block are a plain rotation; the block
        // itself is set analytically and the columns mirror the rows.
        simd::rotate(a.row(p), a.row(q), c, s);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          a(r, p) = a(p, r);
          a(r, q) = a(q, r);
        }
      }
    }
  }
  if (!converged && off_diagonal_norm2(a) > threshold2)
    throw NumericalError("Jacobi eigensolver did not converge within " +
                         std::to_string(options.max_sweeps) + " sweeps");

  result.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = a(i, i);
  return result;
}

}  // namespace tdec
