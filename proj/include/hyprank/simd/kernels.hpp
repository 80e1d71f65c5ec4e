#pragma once

// Dense double-precision kernels behind every hot loop (cosine, projection
// head, classifier). Each instruction set provides the same three
// primitives; the dispatcher picks the widest one the CPU supports at first
// use. Set HYPRANK_SIMD=scalar|avx2|neon to force a variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace hyprank::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
};

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the CPU can run it.
bool available(Isa isa);

// Throws hyprank::Error when the variant is unavailable.
const KernelTable& kernels(Isa isa);

Isa active_isa();
const KernelTable& active();

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

// out = W * x, W row-major rows x cols.
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out);

// W += alpha * u * v^T, W row-major u.size() x v.size().
void rank1_update(double alpha, std::span<const double> u, std::span<const double> v,
                  std::span<double> w);

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(HYPRANK_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(HYPRANK_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

}  // namespace hyprank::simd
