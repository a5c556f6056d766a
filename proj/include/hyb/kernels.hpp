#pragma once

// Dense row-major kernels used by the matrix exponential.
// Every variant accumulates in the same order without fused multiply-add,
// so all of them return bit-identical results.

#include <cstddef>
#include <string_view>

namespace hyb::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// The variant selected at first use: the best available one unless HYB_SIMD=scalar is set.
Isa active_isa();
/// Overrides the selection. Throws std::invalid_argument if the variant is not available on this CPU.
void force_isa(Isa isa);

/// c = a * b for n x n matrices. c must not alias a or b.
void matmul(const double* a, const double* b, double* c, std::size_t n);
/// y = a * x for an n x n matrix. y must not alias x.
void matvec(const double* a, const double* x, double* y, std::size_t n);
/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t len);

namespace scalar {
void matmul(const double* a, const double* b, double* c, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t len);
}  // namespace scalar

namespace avx2 {
void matmul(const double* a, const double* b, double* c, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t len);
}  // namespace avx2

}  // namespace hyb::kernels
