#include <atomic>
#include <cstdlib>
#include <string>

#include "tdec/error.hpp"
#include "tdec/simd/kernels.hpp"

namespace tdec::simd {

#if defined(TDEC_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(TDEC_HAVE_NEON)
const KernelTable& neon_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(TDEC_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(TDEC_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &neon_table();
#else
  return nullptr;
#endif
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (avx2_kernels() != nullptr) out.push_back(Backend::Avx2);
  if (neon_kernels() != nullptr) out.push_back(Backend::Neon);
  return out;
}

const KernelTable& kernels_for(Backend backend) {
  const KernelTable* table = nullptr;
  switch (backend) {
    case Backend::Scalar: return scalar_kernels();
    case Backend::Avx2: table = avx2_kernels(); break;
    case Backend::Neon: table = neon_kernels(); break;
  }
  if (table == nullptr) throw ValueError("SIMD backend '" + std::string(name(backend)) + "' is not available");
  return *table;
}

std::string_view name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

namespace {

const KernelTable* select_default() {
  if (const char* env = std::getenv("TDEC_SIMD")) {
    const std::string_view want(env);
    for (Backend b : available_backends())
      if (name(b) == want) return &kernels_for(b);
    if (want == "scalar") return &scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Backend backend) { slot().store(&kernels_for(backend), std::memory_order_release); }

}  // namespace tdec::simd
