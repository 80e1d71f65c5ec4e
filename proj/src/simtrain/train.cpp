#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "hyprank/error.hpp"
#include "hyprank/rng.hpp"
#include "hyprank/simd/kernels.hpp"
#include "hyprank/simtrain.hpp"

namespace hyprank::simtrain {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
  if (batch_size < 2) throw ConfigError("batch size must be at least 2");
  if (!(margin > 0.0 && margin <= 2.0)) throw ConfigError("contrastive margin must lie in (0, 2]");
  if (!(mnrl_scale > 0.0)) throw ConfigError("ranking loss scale must be positive");
  if (!(binary_threshold > 0.0 && binary_threshold <= 1.0)) throw ConfigError("binary threshold must lie in (0, 1]");
  if (!(init_noise >= 0.0)) throw ConfigError("init noise must be non-negative");
}

namespace {

struct BatchPair {
  std::size_t anchor;
  std::size_t other;
  int label;
  bool exact;  // score == 1.0
};

}  // namespace

TrainResult train(const std::vector<pairgen::ScoredPair>& pairs, const embed::EmbeddingBackend& backend,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (pairs.empty()) throw DataError("no training pairs");

  const std::size_t in_dim = backend.dim();
  const std::size_t out_dim = cfg.out_dim == 0 ? in_dim : cfg.out_dim;
  if (in_dim == 0) throw DataError("embedding backend reports dimension 0");
  if (out_dim > in_dim) throw ConfigError("head output dimension cannot exceed the backend dimension");
  if (out_dim > kMaxHeadWeights / in_dim) {
    throw ConfigError("projection head of " + std::to_string(out_dim) + "x" + std::to_string(in_dim) +
                      " exceeds the weight limit; lower the backend dimension or set an output dimension");
  }

  TrainResult result;

  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const std::string& t) {
    auto [it, inserted] = index.emplace(t, texts.size());
    if (inserted) texts.push_back(t);
    return it->second;
  };
  std::vector<BatchPair> all;
  all.reserve(pairs.size());
  for (const auto& p : pairs) {
    const std::size_t a = intern(p.anchor);
    const std::size_t o = intern(p.other);
    all.push_back(BatchPair{a, o, p.score >= cfg.binary_threshold ? 1 : 0, p.score == 1.0});
  }

  const std::vector<embed::EmbeddingVector> embedded = backend.embed_batch(texts);
  if (embedded.size() != texts.size()) throw DataError("embedding backend returned the wrong number of vectors");
  std::vector<bool> usable(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (embedded[i].dim() != in_dim) throw DataError("embedding dimension mismatch for '" + texts[i] + "'");
    usable[i] = !embed::is_zero(embedded[i].span());
  }
  std::vector<BatchPair> kept;
  for (const auto& bp : all) {
    if (usable[bp.anchor] && usable[bp.other]) kept.push_back(bp);
  }
  if (kept.size() < all.size()) {
    result.warnings.push_back("skipped " + std::to_string(all.size() - kept.size()) +
                              " pair(s) with a zero embedding");
  }
  if (kept.empty()) throw DataError("every training pair has a zero embedding");

  Rng order_rng(child_seed(cfg.seed, 0));
  shuffle(kept, order_rng);
  std::vector<std::vector<BatchPair>> batches;
  for (std::size_t i = 0; i < kept.size(); i += cfg.batch_size) {
    batches.emplace_back(kept.begin() + static_cast<std::ptrdiff_t>(i),
                         kept.begin() + static_cast<std::ptrdiff_t>(std::min(kept.size(), i + cfg.batch_size)));
  }

  ProjectionHead head = ProjectionHead::identity_with_noise(out_dim, in_dim, cfg.init_noise, child_seed(cfg.seed, 1));
  std::vector<double>& w = head.weights();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double sum_mnrl = 0.0, sum_con = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& batch = batches[b];

      // Project each distinct text of the batch once.
      std::map<std::size_t, std::size_t> slot;
      std::vector<std::size_t> members;
      for (const auto& bp : batch) {
        for (std::size_t t : {bp.anchor, bp.other}) {
          if (slot.emplace(t, members.size()).second) members.push_back(t);
        }
      }
      std::vector<std::vector<double>> z(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) z[m] = head.apply(embedded[members[m]].span());
      std::vector<std::vector<double>> grad(members.size(), std::vector<double>(out_dim, 0.0));

      std::vector<VecView> ma, mp;
      std::vector<std::size_t> ma_slot, mp_slot;
      std::vector<VecView> cu, cv;
      std::vector<std::size_t> cu_slot, cv_slot;
      std::vector<int> labels;
      for (const auto& bp : batch) {
        const std::size_t sa = slot.at(bp.anchor), so = slot.at(bp.other);
        if (bp.exact) {
          ma.push_back(z[sa]);
          mp.push_back(z[so]);
          ma_slot.push_back(sa);
          mp_slot.push_back(so);
        }
        cu.push_back(z[sa]);
        cv.push_back(z[so]);
        cu_slot.push_back(sa);
        cv_slot.push_back(so);
        labels.push_back(bp.label);
      }

      const LossGrad mnrl = mnr_loss(ma, mp, cfg.mnrl_scale);
      const LossGrad con = contrastive_loss(cu, cv, labels, cfg.margin, true);
      const double total = mnrl.loss + con.loss;
      if (!std::isfinite(total)) {
        throw Error("non-finite loss in batch " + std::to_string(b) + " of epoch " + std::to_string(epoch + 1));
      }
      sum_mnrl += mnrl.loss;
      sum_con += con.loss;

      for (std::size_t i = 0; i < ma.size(); ++i) {
        simd::axpy(1.0, mnrl.grad_first[i], grad[ma_slot[i]]);
        simd::axpy(1.0, mnrl.grad_second[i], grad[mp_slot[i]]);
      }
      for (std::size_t i = 0; i < cu.size(); ++i) {
        simd::axpy(1.0, con.grad_first[i], grad[cu_slot[i]]);
        simd::axpy(1.0, con.grad_second[i], grad[cv_slot[i]]);
      }
      // z = W x, so dL/dW = sum over texts of dL/dz x^T.
      for (std::size_t m = 0; m < members.size(); ++m) {
        simd::rank1_update(-cfg.learning_rate, grad[m], embedded[members[m]].span(), w);
      }
    }
    const double n = static_cast<double>(batches.size());
    result.trace.push_back(EpochLoss{epoch + 1, sum_mnrl / n, sum_con / n, (sum_mnrl + sum_con) / n});
  }
  result.head = std::move(head);
  return result;
}

std::string trace_csv(const std::vector<EpochLoss>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,mnrl,contrastive,total\n";
  for (const auto& e : trace) out << e.epoch << ',' << e.mnrl << ',' << e.contrastive << ',' << e.total << '\n';
  return out.str();
}

}  // namespace hyprank::simtrain
