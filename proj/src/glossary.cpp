#include "hyprank/glossary.hpp"

#include <algorithm>
#include <tuple>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"

namespace hyprank::glossary {

OverlapRatios overlap_ratios(const textnorm::TokenSet& s1, const textnorm::TokenSet& s2) {
  if (s1.empty()) throw DataError("overlap ratio undefined for an empty term token set");
  std::size_t common = 0;
  for (const auto& t : s1) common += s2.count(t);
  const double n1 = static_cast<double>(s1.size());
  return OverlapRatios{static_cast<double>(common) / n1, static_cast<double>(s2.size()) / n1};
}

bool accept_match(const OverlapRatios& r, const MatchThresholds& t) {
  return r.ratio1 >= t.ratio1_min && r.ratio2 <= t.ratio2_max;
}

std::optional<std::string> match_lookup(const std::string& term, const std::vector<LookupCandidate>& candidates,
                                        const MatchThresholds& t) {
  textnorm::TokenSet s1 = textnorm::token_set(textnorm::clean(term));
  if (s1.empty()) return std::nullopt;
  const LookupCandidate* best = nullptr;
  OverlapRatios best_r;
  for (const auto& c : candidates) {
    OverlapRatios r = overlap_ratios(s1, textnorm::token_set(textnorm::clean(c.label)));
    if (!accept_match(r, t)) continue;
    bool better = best == nullptr ||
                  std::make_tuple(-r.ratio1, r.ratio2, c.score_rank) <
                      std::make_tuple(-best_r.ratio1, best_r.ratio2, best->score_rank);
    if (better) {
      best = &c;
      best_r = r;
    }
  }
  if (best == nullptr || best->description.empty()) return std::nullopt;
  return best->description;
}

std::optional<GlossaryEntry> match_exact(const std::string& term, const std::vector<GlossaryEntry>& glossary) {
  const textnorm::CleanText key = textnorm::clean(term);
  if (key.empty()) return std::nullopt;
  for (const auto& e : glossary) {
    if (textnorm::clean(e.term) == key) return e;
  }
  return std::nullopt;
}

std::vector<GlossaryEntry> load_glossary(const std::filesystem::path& path) {
  std::vector<GlossaryEntry> out;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    const std::string at = path.string() + ":" + std::to_string(line);
    if (!row.is_object()) throw DataError(at + ": expected an object");
    auto field = [&](const char* name) {
      if (!row.contains(name) || !row[name].is_string() || row[name].get<std::string>().empty()) {
        throw DataError(at + ": needs a non-empty string '" + name + "'");
      }
      return row[name].get<std::string>();
    };
    GlossaryEntry e{field("term"), field("definition"), GlossarySource::FIBO};
    std::string source = field("source");
    if (source == "FIBO") {
      e.source = GlossarySource::FIBO;
    } else if (source == "Investopedia") {
      e.source = GlossarySource::Investopedia;
    } else {
      throw DataError(at + ": unknown glossary source '" + source + "'");
    }
    out.push_back(std::move(e));
  });
  return out;
}

GlossaryIndex::GlossaryIndex(const std::vector<GlossaryEntry>& entries) {
  for (const auto& e : entries) {
    textnorm::CleanText key = textnorm::clean(e.term);
    if (key.empty()) continue;
    auto& index = e.source == GlossarySource::FIBO ? fibo_ : investopedia_;
    index.emplace(key.text(), e);
  }
}

std::optional<GlossaryEntry> GlossaryIndex::find(const std::string& term, GlossarySource source) const {
  const auto& index = source == GlossarySource::FIBO ? fibo_ : investopedia_;
  auto it = index.find(textnorm::clean(term).text());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

AugmentResult augment(const std::vector<corpus::TermRow>& terms, const AugmentSources& sources) {
  using corpus::AugmentedRecord;
  using corpus::Source;

  AugmentResult result;
  std::vector<std::vector<LookupCandidate>> lookups(terms.size());
  if (sources.lookup != nullptr) {
    std::vector<std::string> queries;
    queries.reserve(terms.size());
    for (const auto& t : terms) queries.push_back(t.term);
    auto batch = sources.lookup->lookup_all(queries);
    lookups = std::move(batch.candidates);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (batch.errors[i]) result.errors.push_back(terms[i].term + ": " + *batch.errors[i]);
    }
  }

  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& row = terms[i];
    auto emit = [&](std::string surface, Source source) {
      result.dataset.add(AugmentedRecord{row.term, std::move(surface), row.label, source});
    };
    emit(row.term, Source::Original);
    if (sources.acronyms != nullptr) {
      if (auto expanded = acronym::expand_term(row.term, *sources.acronyms)) emit(*expanded, Source::AcronymExpansion);
    }
    if (sources.lookup != nullptr) {
      if (auto description = match_lookup(row.term, lookups[i], sources.thresholds)) {
        emit(*description, Source::DBpedia);
      }
    }
    if (sources.glossaries != nullptr) {
      if (auto e = sources.glossaries->find(row.term, GlossarySource::FIBO)) emit(e->definition, Source::FIBO);
      if (auto e = sources.glossaries->find(row.term, GlossarySource::Investopedia)) {
        emit(e->definition, Source::Investopedia);
      }
    }
  }
  return result;
}

}  // namespace hyprank::glossary
