#include "hyprank/simd/kernels.hpp"

namespace hyprank::simd::detail {
namespace {

// Reference implementations: one accumulator, strictly left-to-right.

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelTable kScalarKernels{dot_scalar, axpy_scalar, scale_scalar};

}  // namespace hyprank::simd::detail
