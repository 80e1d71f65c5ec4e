#include <cmath>

#include "hyprank/embed.hpp"
#include "hyprank/error.hpp"
#include "hyprank/simd/kernels.hpp"

namespace hyprank::embed {

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DataError("dimension mismatch in dot product");
  return simd::dot(u, v);
}

double norm(std::span<const double> u) { return std::sqrt(simd::dot(u, u)); }

bool is_zero(std::span<const double> u) {
  for (double x : u) {
    if (x != 0.0) return false;
  }
  return true;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DataError("cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                    std::to_string(v.size()));
  }
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw DataError("cosine similarity is undefined for a zero vector");
  return simd::dot(u, v) / (nu * nv);
}

void normalize(std::span<double> u) {
  const double n = norm(u);
  if (n == 0.0) return;
  simd::scale(1.0 / n, u);
}

}  // namespace hyprank::embed
