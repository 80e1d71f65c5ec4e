#include "hyprank/pairgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rng.hpp"

namespace hyprank::pairgen {

void PairGenConfig::validate() const {
  taxonomy::check_k(k);
  if (negatives_per_positive < 1) throw ConfigError("negatives per positive must be >= 1");
  if (!(target_zero_fraction > 0.0 && target_zero_fraction < 1.0)) {
    throw ConfigError("target zero fraction must lie in (0, 1)");
  }
}

GenerateResult generate(const corpus::Dataset& train, const corpus::LabelCatalog& catalog,
                        const taxonomy::Taxonomy& taxonomy, const PairGenConfig& cfg) {
  cfg.validate();
  const auto& records = train.records();
  const std::size_t n_labels = catalog.labels().size();

  // Records grouped by "label differs from L", one index list per label.
  std::vector<std::vector<std::size_t>> eligible(n_labels);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label) {
      throw DataError("training record '" + records[i].term + "' has no label");
    }
  }
  for (std::size_t l = 0; l < n_labels; ++l) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].label->index != l) eligible[l].push_back(i);
    }
  }

  GenerateResult out;
  out.pairs.reserve(records.size() * (1 + cfg.negatives_per_positive));
  std::vector<bool> warned(n_labels, false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const corpus::LabelId label = *rec.label;
    out.pairs.push_back(ScoredPair{rec.surface, catalog.definition(label), 1.0, label, label});

    const auto& pool = eligible[label.index];
    if (pool.empty()) {
      throw DataError("no record with a label other than '" + catalog.labels().name(label) +
                      "' to draw negatives from");
    }
    Rng rng(child_seed(cfg.seed, i));
    std::vector<std::size_t> picks;
    if (pool.size() >= cfg.negatives_per_positive) {
      picks = sample_without_replacement(pool.size(), cfg.negatives_per_positive, rng);
    } else {
      if (!warned[label.index]) {
        warned[label.index] = true;
        std::ostringstream os;
        os << "only " << pool.size() << " records outside label '" << catalog.labels().name(label) << "' for "
           << cfg.negatives_per_positive << " negatives; sampling with replacement";
        out.warnings.push_back(os.str());
      }
      for (std::size_t d = 0; d < cfg.negatives_per_positive; ++d) picks.push_back(uniform_index(rng, pool.size()));
    }
    for (std::size_t p : picks) {
      const corpus::LabelId other = *records[pool[p]].label;
      out.pairs.push_back(ScoredPair{rec.surface, catalog.definition(other),
                                     taxonomy::pair_score(taxonomy, label, other, cfg.k), label, other});
    }
  }
  return out;
}

std::vector<ScoredPair> undersample_zeros(const std::vector<ScoredPair>& pairs, double target_zero_fraction,
                                          std::uint64_t seed) {
  if (!(target_zero_fraction > 0.0 && target_zero_fraction < 1.0)) {
    throw ConfigError("target zero fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> zeros;
  std::vector<ScoredPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].score == 0.0) {
      zeros.push_back(i);
    } else {
      out.push_back(pairs[i]);
    }
  }
  if (out.empty()) throw DataError("cannot undersample: every pair has score 0");
  const double wanted = target_zero_fraction / (1.0 - target_zero_fraction) * static_cast<double>(out.size());
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::llround(wanted)), zeros.size());

  Rng rng(seed);
  shuffle(zeros, rng);
  zeros.resize(keep);
  std::sort(zeros.begin(), zeros.end());
  for (std::size_t i : zeros) out.push_back(pairs[i]);
  shuffle(out, rng);
  return out;
}

std::map<double, Bucket> distribution_report(const std::vector<ScoredPair>& pairs) {
  std::map<double, Bucket> report;
  for (const auto& p : pairs) ++report[p.score].count;
  for (auto& [score, bucket] : report) {
    bucket.fraction = static_cast<double>(bucket.count) / static_cast<double>(pairs.size());
  }
  return report;
}

std::string serialize_pairs(const std::vector<ScoredPair>& pairs, const corpus::LabelSet& labels) {
  std::string out;
  for (const auto& p : pairs) {
    out += io::dump_line(io::json{{"anchor", p.anchor},
                                  {"other", p.other},
                                  {"score", p.score},
                                  {"anchor_label", labels.name(p.anchor_label)},
                                  {"other_label", labels.name(p.other_label)}});
    out += '\n';
  }
  return out;
}

std::vector<ScoredPair> load_pairs(const std::filesystem::path& path, const corpus::LabelSet& labels) {
  std::vector<ScoredPair> out;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    const std::string at = path.string() + ":" + std::to_string(line);
    try {
      ScoredPair p;
      p.anchor = row.at("anchor").get<std::string>();
      p.other = row.at("other").get<std::string>();
      p.score = row.at("score").get<double>();
      p.anchor_label = labels.at(row.at("anchor_label").get<std::string>());
      p.other_label = labels.at(row.at("other_label").get<std::string>());
      out.push_back(std::move(p));
    } catch (const io::json::exception& e) {
      throw DataError(at + ": malformed pair: " + e.what());
    } catch (const DataError& e) {
      throw DataError(at + ": " + e.what());
    }
  });
  return out;
}

}  // namespace hyprank::pairgen
