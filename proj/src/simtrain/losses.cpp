#include <algorithm>
#include <cmath>
#include <limits>

#include "hyprank/embed.hpp"
#include "hyprank/error.hpp"
#include "hyprank/rng.hpp"
#include "hyprank/simd/kernels.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::simtrain {
namespace {

struct CosineParts {
  double cos;
  double norm_u;
  double norm_v;
};

CosineParts cosine_parts(VecView u, VecView v) {
  const double nu = embed::norm(u);
  const double nv = embed::norm(v);
  if (nu == 0.0 || nv == 0.0) throw DataError("loss evaluated on a zero vector");
  return {simd::dot(u, v) / (nu * nv), nu, nv};
}

// grad_u += coeff * d cos(u, v) / du = coeff * (v / (|u||v|) - cos * u / |u|^2)
void add_cos_grad(double coeff, VecView u, VecView v, const CosineParts& c, std::vector<double>& grad_u) {
  simd::axpy(coeff / (c.norm_u * c.norm_v), v, grad_u);
  simd::axpy(-coeff * c.cos / (c.norm_u * c.norm_u), u, grad_u);
}

std::vector<std::vector<double>> zeros_like(const std::vector<VecView>& xs) {
  std::vector<std::vector<double>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.emplace_back(x.size(), 0.0);
  return out;
}

}  // namespace

LossGrad mnr_loss(const std::vector<VecView>& anchors, const std::vector<VecView>& positives, double scale) {
  if (anchors.size() != positives.size()) throw DataError("ranking loss needs one positive per anchor");
  const std::size_t b = anchors.size();
  LossGrad out;
  out.grad_first = zeros_like(anchors);
  out.grad_second = zeros_like(positives);
  if (b == 0) return out;

  std::vector<CosineParts> parts(b * b);
  std::vector<double> logits(b * b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      parts[i * b + j] = cosine_parts(anchors[i], positives[j]);
      logits[i * b + j] = scale * parts[i * b + j].cos;
    }
  }

  const double inv_b = 1.0 / static_cast<double>(b);
  double total = 0.0;
  std::vector<double> probs(b);
  for (std::size_t i = 0; i < b; ++i) {
    const double* row = &logits[i * b];
    const std::size_t arg = static_cast<std::size_t>(std::max_element(row, row + b) - row);
    const double m = row[arg];
    double rest = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
      if (j != arg) rest += std::exp(row[j] - m);
    }
    total += (m - row[i]) + std::log1p(rest);
    const double denom = 1.0 + rest;
    for (std::size_t j = 0; j < b; ++j) probs[j] = (j == arg ? 1.0 : std::exp(row[j] - m)) / denom;

    for (std::size_t j = 0; j < b; ++j) {
      const double d_logit = (probs[j] - (i == j ? 1.0 : 0.0)) * inv_b;
      if (d_logit == 0.0) continue;
      const double coeff = d_logit * scale;
      const CosineParts& c = parts[i * b + j];
      add_cos_grad(coeff, anchors[i], positives[j], c, out.grad_first[i]);
      add_cos_grad(coeff, positives[j], anchors[i], CosineParts{c.cos, c.norm_v, c.norm_u}, out.grad_second[j]);
    }
  }
  out.loss = total * inv_b;
  return out;
}

double contrastive_term(double distance, int label, double margin) {
  if (label == 1) return distance * distance;
  const double gap = std::max(0.0, margin - distance);
  return gap * gap;
}

LossGrad contrastive_loss(const std::vector<VecView>& u, const std::vector<VecView>& v, const std::vector<int>& labels,
                          double margin, bool online) {
  const std::size_t n = u.size();
  if (v.size() != n || labels.size() != n) throw DataError("contrastive loss inputs differ in length");
  LossGrad out;
  out.grad_first = zeros_like(u);
  out.grad_second = zeros_like(v);
  if (n == 0) return out;

  std::vector<CosineParts> parts(n);
  std::vector<double> dist(n);
  double max_pos = -std::numeric_limits<double>::infinity();
  double min_neg = std::numeric_limits<double>::infinity();
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("contrastive labels must be 0 or 1");
    parts[i] = cosine_parts(u[i], v[i]);
    dist[i] = 1.0 - parts[i].cos;
    if (labels[i] == 1) {
      has_pos = true;
      max_pos = std::max(max_pos, dist[i]);
    } else {
      has_neg = true;
      min_neg = std::min(min_neg, dist[i]);
    }
  }

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    bool keep = true;
    if (online && has_pos && has_neg) keep = labels[i] == 1 ? dist[i] > min_neg : dist[i] < max_pos;
    if (keep) active.push_back(i);
  }
  if (active.empty()) return out;

  const double inv = 1.0 / static_cast<double>(active.size());
  double total = 0.0;
  for (std::size_t i : active) {
    total += contrastive_term(dist[i], labels[i], margin);
    // dL/dcos = -dL/dd
    double d_cos = 0.0;
    if (labels[i] == 1) {
      d_cos = -2.0 * dist[i];
    } else if (dist[i] < margin) {
      d_cos = 2.0 * (margin - dist[i]);
    }
    if (d_cos == 0.0) continue;
    const CosineParts& c = parts[i];
    add_cos_grad(d_cos * inv, u[i], v[i], c, out.grad_first[i]);
    add_cos_grad(d_cos * inv, v[i], u[i], CosineParts{c.cos, c.norm_v, c.norm_u}, out.grad_second[i]);
  }
  out.loss = total * inv;
  return out;
}

double grad_check(const LossFunction& f, std::span<const double> x, double epsilon, std::size_t max_coords,
                  std::uint64_t seed) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw ConfigError("grad_check epsilon must lie in [1e-7, 1e-3]");
  const std::size_t n = x.size();
  std::vector<double> analytic(n, 0.0);
  f(x, analytic);

  std::vector<std::size_t> coords;
  if (max_coords == 0 || max_coords >= n) {
    for (std::size_t i = 0; i < n; ++i) coords.push_back(i);
  } else {
    if (max_coords < 100) throw ConfigError("grad_check samples at least 100 coordinates");
    Rng rng(seed);
    coords = sample_without_replacement(n, max_coords, rng);
  }

  std::vector<double> probe(x.begin(), x.end());
  std::span<double> no_grad;
  double worst = 0.0;
  for (std::size_t i : coords) {
    const double saved = probe[i];
    probe[i] = saved + epsilon;
    const double up = f(probe, no_grad);
    probe[i] = saved - epsilon;
    const double down = f(probe, no_grad);
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double err = std::abs(analytic[i] - numeric) / std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<BinaryPair> binarize(const std::vector<pairgen::ScoredPair>& pairs, double threshold) {
  std::vector<BinaryPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(BinaryPair{p.anchor, p.other, p.score >= threshold ? 1 : 0});
  return out;
}

}  // namespace hyprank::simtrain
