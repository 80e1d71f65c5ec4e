#pragma once

// Flat-vector wrappers around the two losses, shared by the unit tests and
// the acceptance gate.

#include <cmath>
#include <vector>

#include "hyprank/rng.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::testing {

// x holds b first-side vectors followed by b second-side vectors, each of dim d.
inline std::vector<simtrain::VecView> views(std::span<const double> x, std::size_t b, std::size_t d, std::size_t side) {
  std::vector<simtrain::VecView> out;
  for (std::size_t i = 0; i < b; ++i) out.push_back(x.subspan((side * b + i) * d, d));
  return out;
}

inline void scatter(const simtrain::LossGrad& lg, std::size_t b, std::size_t d, std::span<double> grad) {
  if (grad.empty()) return;
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      grad[i * d + k] = lg.grad_first[i][k];
      grad[(b + i) * d + k] = lg.grad_second[i][k];
    }
  }
}

inline simtrain::LossFunction mnr_function(std::size_t b, std::size_t d, double scale) {
  return [=](std::span<const double> x, std::span<double> grad) {
    auto lg = simtrain::mnr_loss(views(x, b, d, 0), views(x, b, d, 1), scale);
    scatter(lg, b, d, grad);
    return lg.loss;
  };
}

inline simtrain::LossFunction contrastive_function(std::vector<int> labels, std::size_t d, double margin, bool online) {
  return [=](std::span<const double> x, std::span<double> grad) {
    const std::size_t b = labels.size();
    auto lg = simtrain::contrastive_loss(views(x, b, d, 0), views(x, b, d, 1), labels, margin, online);
    scatter(lg, b, d, grad);
    return lg.loss;
  };
}

inline std::vector<double> random_point(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * uniform_unit(rng) - 1.0;
  return x;
}

// Random labels with both classes present.
inline std::vector<int> random_labels(std::uint64_t seed, std::size_t b) {
  Rng rng(seed ^ 0x5bd1e995ULL);
  std::vector<int> labels(b);
  for (auto& l : labels) l = uniform_unit(rng) < 0.5 ? 1 : 0;
  labels[0] = 1;
  labels[1] = 0;
  return labels;
}

}  // namespace hyprank::testing
