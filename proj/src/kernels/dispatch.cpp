#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hyb/kernels.hpp"

namespace hyb::kernels {

namespace {

Isa detect() {
  const char* env = std::getenv("HYB_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return Isa::scalar;
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(HYB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument(std::string(isa_name(isa)) + " kernels are not available");
  selected().store(isa, std::memory_order_relaxed);
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
#if defined(HYB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::matmul(a, b, c, n);
#endif
  scalar::matmul(a, b, c, n);
}

void matvec(const double* a, const double* x, double* y, std::size_t n) {
#if defined(HYB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::matvec(a, x, y, n);
#endif
  scalar::matvec(a, x, y, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t len) {
#if defined(HYB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::axpy(alpha, x, y, len);
#endif
  scalar::axpy(alpha, x, y, len);
}

}  // namespace hyb::kernels
