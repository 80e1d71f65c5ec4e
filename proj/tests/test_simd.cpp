#include <doctest.h>

#include <cmath>
#include <vector>

#include "hyprank/rng.hpp"
#include "hyprank/simd/kernels.hpp"

using namespace hyprank;
using simd::Isa;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * uniform_unit(rng) - 1.0;
  return v;
}

std::vector<Isa> variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (simd::available(isa)) out.push_back(isa);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar kernels match the textbook loops exactly") {
  const auto& k = simd::kernels(Isa::Scalar);
  const std::vector<double> x{1.5, -2.0, 3.25};
  std::vector<double> y{0.5, 0.5, 0.5};
  CHECK(k.dot(x.data(), y.data(), 3) == doctest::Approx(1.375));
  k.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3.5, -3.5, 7.0});
  k.scale(0.5, y.data(), 3);
  CHECK(y == std::vector<double>{1.75, -1.75, 3.5});
  CHECK(k.dot(x.data(), y.data(), 0) == 0.0);
}

TEST_CASE("every compiled variant agrees with the scalar reference") {
  const auto& ref = simd::kernels(Isa::Scalar);
  Rng rng(7);
  for (Isa isa : variants()) {
    CAPTURE(simd::isa_name(isa));
    const auto& k = simd::kernels(isa);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u}) {
      CAPTURE(n);
      const auto x = random_vector(rng, n);
      const auto y0 = random_vector(rng, n);

      const double d_ref = ref.dot(x.data(), y0.data(), n);
      const double d = k.dot(x.data(), y0.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y0[i]);
      CHECK(std::abs(d - d_ref) <= 1e-14 * (1.0 + mag));

      auto y_ref = y0, y = y0;
      ref.axpy(-0.37, x.data(), y_ref.data(), n);
      k.axpy(-0.37, x.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - y_ref[i]) <= 1e-15);

      auto s_ref = y0, s = y0;
      ref.scale(1.7, s_ref.data(), n);
      k.scale(1.7, s.data(), n);
      CHECK(s == s_ref);
    }
  }
}

TEST_CASE("gemv and rank1_update follow their definitions") {
  Rng rng(11);
  const std::size_t rows = 5, cols = 13;
  const auto w0 = random_vector(rng, rows * cols);
  const auto x = random_vector(rng, cols);
  std::vector<double> out(rows);
  simd::gemv(w0, rows, cols, x, out);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += w0[r * cols + c] * x[c];
    CHECK(out[r] == doctest::Approx(acc).epsilon(1e-12));
  }

  const auto u = random_vector(rng, rows);
  auto w = w0;
  simd::rank1_update(0.25, u, x, w);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      CHECK(w[r * cols + c] == doctest::Approx(w0[r * cols + c] + 0.25 * u[r] * x[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("the active variant is one that is available") {
  CHECK(simd::available(simd::active_isa()));
  CHECK(simd::available(Isa::Scalar));
}
