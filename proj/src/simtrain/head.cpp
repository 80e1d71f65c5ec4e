#include <cmath>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rng.hpp"
#include "hyprank/simd/kernels.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::simtrain {

ProjectionHead::ProjectionHead(std::size_t out_dim, std::size_t in_dim, std::vector<double> weights)
    : out_dim_(out_dim), in_dim_(in_dim), weights_(std::move(weights)) {
  if (out_dim == 0 || in_dim == 0) throw DataError("projection head dimensions must be positive");
  if (out_dim > in_dim) throw DataError("projection head output dimension exceeds its input dimension");
  for (double x : weights_) {
    if (!std::isfinite(x)) throw DataError("projection head holds a non-finite weight");
  }
  if (weights_.size() != out_dim * in_dim) {
    throw DataError("projection head holds " + std::to_string(weights_.size()) + " weights, expected " +
                    std::to_string(out_dim * in_dim));
  }
}

ProjectionHead ProjectionHead::identity(std::size_t dim) {
  return identity_with_noise(dim, dim, 0.0, 0);
}

ProjectionHead ProjectionHead::identity_with_noise(std::size_t out_dim, std::size_t in_dim, double noise,
                                                   std::uint64_t seed) {
  std::vector<double> w(out_dim * in_dim, 0.0);
  if (noise > 0.0) {
    Rng rng(seed);
    for (double& x : w) x = (2.0 * uniform_unit(rng) - 1.0) * noise;
  }
  for (std::size_t i = 0; i < std::min(out_dim, in_dim); ++i) w[i * in_dim + i] += 1.0;
  return ProjectionHead(out_dim, in_dim, std::move(w));
}

std::vector<double> ProjectionHead::apply(std::span<const double> x) const {
  if (x.size() != in_dim_) {
    throw DataError("projection head expects dimension " + std::to_string(in_dim_) + ", got " +
                    std::to_string(x.size()));
  }
  std::vector<double> out(out_dim_, 0.0);
  simd::gemv(weights_, out_dim_, in_dim_, x, out);
  return out;
}

embed::EmbeddingVector ProjectionHead::project(std::span<const double> x) const {
  embed::EmbeddingVector z(apply(x));
  if (embed::is_zero(z.span())) throw DataError("projection head produced a zero vector");
  embed::normalize(z.span());
  return z;
}

std::string ProjectionHead::to_json() const {
  io::json j;
  j["out_dim"] = out_dim_;
  j["in_dim"] = in_dim_;
  j["weights"] = weights_;
  return j.dump();
}

ProjectionHead ProjectionHead::from_json_text(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
    return ProjectionHead(j.at("out_dim").get<std::size_t>(), j.at("in_dim").get<std::size_t>(),
                          j.at("weights").get<std::vector<double>>());
  } catch (const io::json::exception& e) {
    throw DataError(std::string("malformed projection head: ") + e.what());
  }
}

ProjectionHead ProjectionHead::load(const std::filesystem::path& path) {
  try {
    return from_json_text(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace hyprank::simtrain
