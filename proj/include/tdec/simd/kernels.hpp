#pragma once

// Data-parallel inner loops shared by the correlation, eigensolver and
// kernel-matrix code. Each kernel has a scalar reference implementation and
// vectorized variants; the active table is chosen once at startup from the
// CPU's capabilities and may be overridden with TDEC_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tdec::simd {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  double (*sum)(std::span<const double> x);
  double (*dot)(std::span<const double> a, std::span<const double> b);
  double (*squared_distance)(std::span<const double> a, std::span<const double> b);
  // x <- (x - shift) * scale
  void (*shift_scale)(std::span<double> x, double shift, double scale);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(std::span<double> x, std::span<double> y, double c, double s);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the extension.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

std::vector<Backend> available_backends();
const KernelTable& kernels_for(Backend backend);

// The table used by the library. Selected lazily on first use.
const KernelTable& active();
void set_active(Backend backend);

std::string_view name(Backend backend);

inline double sum(std::span<const double> x) { return active().sum(x); }
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a, b);
}
inline void shift_scale(std::span<double> x, double shift, double scale) {
  active().shift_scale(x, shift, scale);
}
inline void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active().rotate(x, y, c, s);
}

}  // namespace tdec::simd
