#include <arm_neon.h>

#include "tdec/simd/kernels.hpp"

namespace tdec::simd {
namespace {

double sum_neon(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(p + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(p + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += p[i];
  return acc;
}

double dot_neon(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(pa + i), vld1q_f64(pb + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(pa + i + 2), vld1q_f64(pb + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

double squared_distance_neon(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(pa + i), vld1q_f64(pb + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = pa[i] - pb[i];
    out += d * d;
  }
  return out;
}

void shift_scale_neon(std::span<double> x, double shift, double scale) {
  double* p = x.data();
  const std::size_t n = x.size();
  const float64x2_t vshift = vdupq_n_f64(shift);
  const float64x2_t vscale = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(p + i, vmulq_f64(vsubq_f64(vld1q_f64(p + i), vshift), vscale));
  for (; i < n; ++i) p[i] = (p[i] - shift) * scale;
}

void rotate_neon(std::span<double> x, std::span<double> y, double c, double s) {
  double* px = x.data();
  double* py = y.data();
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(px + i);
    const float64x2_t yi = vld1q_f64(py + i);
    vst1q_f64(px + i, vfmsq_n_f64(vmulq_n_f64(xi, c), yi, s));
    vst1q_f64(py + i, vfmaq_n_f64(vmulq_n_f64(yi, c), xi, s));
  }
  for (; i < n; ++i) {
    const double xi = px[i];
    const double yi = py[i];
    px[i] = c * xi - s * yi;
    py[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::Neon,         sum_neon,         dot_neon,
                                 squared_distance_neon, shift_scale_neon, rotate_neon};
  return table;
}

}  // namespace tdec::simd
