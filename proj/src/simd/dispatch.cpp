#include <cstdlib>
#include <string>

#include "hyprank/error.hpp"
#include "hyprank/simd/kernels.hpp"

namespace hyprank::simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(HYPRANK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(HYPRANK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa select_isa() {
  if (const char* forced = std::getenv("HYPRANK_SIMD")) {
    std::string name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == isa_name(isa)) {
        if (!available(isa)) throw Error("HYPRANK_SIMD=" + name + " is not supported on this CPU");
        return isa;
      }
    }
    throw Error("unknown HYPRANK_SIMD value: " + name);
  }
  if (available(Isa::Avx2)) return Isa::Avx2;
  if (available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

bool available(Isa isa) { return cpu_supports(isa); }

const KernelTable& kernels(Isa isa) {
  if (!available(isa)) throw Error("SIMD variant " + std::string(isa_name(isa)) + " unavailable");
  switch (isa) {
#if defined(HYPRANK_HAVE_AVX2)
    case Isa::Avx2: return detail::kAvx2Kernels;
#endif
#if defined(HYPRANK_HAVE_NEON)
    case Isa::Neon: return detail::kNeonKernels;
#endif
    default: return detail::kScalarKernels;
  }
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& table = kernels(active_isa());
  return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out) {
  const KernelTable& k = active();
  for (std::size_t r = 0; r < rows; ++r) out[r] = k.dot(w.data() + r * cols, x.data(), cols);
}

void rank1_update(double alpha, std::span<const double> u, std::span<const double> v,
                  std::span<double> w) {
  const KernelTable& k = active();
  const std::size_t cols = v.size();
  for (std::size_t r = 0; r < u.size(); ++r) {
    if (u[r] == 0.0) continue;
    k.axpy(alpha * u[r], v.data(), w.data() + r * cols, cols);
  }
}

}  // namespace hyprank::simd
