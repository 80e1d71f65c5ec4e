#include "hyprank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rng.hpp"

namespace hyprank::corpus {
namespace {

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

TermRow parse_term_row(const io::json& row, std::size_t line, const std::filesystem::path& path,
                       const LabelSet& labels, bool require_label) {
  if (!row.is_object() || !row.contains("term") || !row["term"].is_string()) {
    throw DataError(where(path, line) + ": row needs a string field 'term'");
  }
  TermRow out;
  out.term = trim(row["term"].get<std::string>());
  if (out.term.empty()) throw DataError(where(path, line) + ": empty term");
  if (row.contains("label") && !row["label"].is_null()) {
    if (!row["label"].is_string()) throw DataError(where(path, line) + ": 'label' must be a string");
    std::string name = row["label"].get<std::string>();
    auto id = labels.find(name);
    if (!id) throw DataError(where(path, line) + ": unknown label '" + name + "'");
    out.label = *id;
  } else if (require_label) {
    throw DataError(where(path, line) + ": missing 'label'");
  }
  return out;
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    by_name_.emplace(names_[i], LabelId{static_cast<std::uint8_t>(i)});
  }
}

LabelSet LabelSet::finsim() {
  return LabelSet(std::vector<std::string>(kFinsimLabelNames.begin(), kFinsimLabelNames.end()));
}

LabelSet LabelSet::subset(const std::vector<std::string>& names) {
  std::set<std::string> wanted;
  for (const auto& n : names) {
    if (std::find(kFinsimLabelNames.begin(), kFinsimLabelNames.end(), n) == kFinsimLabelNames.end()) {
      throw ConfigError("unknown label name '" + n + "'");
    }
    if (!wanted.insert(n).second) throw ConfigError("label '" + n + "' listed twice");
  }
  if (wanted.size() < 2) throw ConfigError("a label set needs at least two labels");
  std::vector<std::string> ordered;
  for (auto n : kFinsimLabelNames) {
    if (wanted.count(std::string(n))) ordered.emplace_back(n);
  }
  return LabelSet(std::move(ordered));
}

std::optional<LabelId> LabelSet::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

LabelId LabelSet::at(std::string_view name) const {
  auto id = find(name);
  if (!id) throw DataError("unknown label '" + std::string(name) + "'");
  return *id;
}

std::vector<LabelId> LabelSet::ids() const {
  std::vector<LabelId> out;
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back(LabelId{static_cast<std::uint8_t>(i)});
  return out;
}

std::vector<TermRow> load_term_rows(const std::filesystem::path& path, const LabelSet& labels) {
  std::vector<TermRow> rows;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    rows.push_back(parse_term_row(row, line, path, labels, false));
  });
  return rows;
}

std::vector<LabeledTerm> load_labeled_terms(const std::filesystem::path& path, const LabelSet& labels) {
  std::vector<LabeledTerm> rows;
  std::set<std::pair<std::string, LabelId>> seen;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    TermRow parsed = parse_term_row(row, line, path, labels, true);
    if (seen.emplace(parsed.term, *parsed.label).second) {
      rows.push_back(LabeledTerm{std::move(parsed.term), *parsed.label});
    }
  });
  return rows;
}

std::string serialize_labeled_terms(const std::vector<LabeledTerm>& rows, const LabelSet& labels) {
  std::string out;
  for (const auto& r : rows) {
    out += io::dump_line(io::json{{"term", r.term}, {"label", labels.name(r.label)}});
    out += '\n';
  }
  return out;
}

Split split(const std::vector<LabeledTerm>& records, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  const std::size_t n = records.size();
  if (n < 2) throw DataError("need at least two records to split");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  Split out;
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? out.train : out.validation).push_back(records[order[i]]);
  }
  return out;
}

// ---- catalog ----

std::string CatalogReport::describe() const {
  std::ostringstream os;
  auto list = [&](const char* what, const std::vector<std::string>& items) {
    if (items.empty()) return;
    os << what << ":";
    for (const auto& s : items) os << " '" << s << "'";
    os << "; ";
  };
  list("missing labels", missing);
  list("duplicated labels", duplicated);
  list("unknown labels", unknown);
  list("empty definitions", empty_definitions);
  std::string s = os.str();
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

CatalogReport validate_catalog(const std::vector<CatalogEntry>& entries, const LabelSet& labels) {
  CatalogReport report;
  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    if (!labels.find(e.label)) {
      report.unknown.push_back(e.label);
      continue;
    }
    if (++seen[e.label] == 2) report.duplicated.push_back(e.label);
    if (e.definition.find_first_not_of(" \t\r\n") == std::string::npos) {
      report.empty_definitions.push_back(e.label);
    }
  }
  for (const auto& name : labels.names()) {
    if (!seen.count(name)) report.missing.push_back(name);
  }
  return report;
}

LabelCatalog::LabelCatalog(const std::vector<CatalogEntry>& entries, const LabelSet& labels)
    : labels_(labels), definitions_(labels.size()) {
  CatalogReport report = validate_catalog(entries, labels);
  if (!report.ok()) throw DataError("invalid label catalog: " + report.describe());
  for (const auto& e : entries) definitions_[labels.at(e.label).index] = e.definition;
}

std::vector<CatalogEntry> read_catalog_entries(const std::filesystem::path& path) {
  io::json doc = io::read_json(path);
  if (!doc.is_array()) throw DataError(path.string() + ": catalog must be a JSON array");
  std::vector<CatalogEntry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.value("label", io::json()).is_string() ||
        !item.value("definition", io::json()).is_string()) {
      throw DataError(path.string() + ": catalog entries need string 'label' and 'definition'");
    }
    entries.push_back({item["label"].get<std::string>(), item["definition"].get<std::string>()});
  }
  return entries;
}

LabelCatalog load_catalog(const std::filesystem::path& path, const LabelSet& labels) {
  try {
    return LabelCatalog(read_catalog_entries(path), labels);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// ---- augmented records ----

std::string_view source_name(Source source) {
  switch (source) {
    case Source::Original: return "Original";
    case Source::AcronymExpansion: return "AcronymExpansion";
    case Source::DBpedia: return "DBpedia";
    case Source::FIBO: return "FIBO";
    case Source::Investopedia: return "Investopedia";
  }
  return "?";
}

Source parse_source(std::string_view name) {
  for (Source s : kAllSources) {
    if (source_name(s) == name) return s;
  }
  throw DataError("unknown source '" + std::string(name) + "'");
}

void Dataset::add(AugmentedRecord record) {
  if (record.surface.empty()) throw DataError("augmented record for '" + record.term + "' has an empty surface");
  if (record.source == Source::Original && record.surface != record.term) {
    throw DataError("original record surface differs from its term '" + record.term + "'");
  }
  ++counts_[record.source];
  records_.push_back(std::move(record));
}

std::string serialize_dataset(const Dataset& dataset, const LabelSet& labels) {
  std::string out;
  for (const auto& r : dataset.records()) {
    io::json row = {{"term", r.term}, {"surface", r.surface}};
    if (r.label) row["label"] = labels.name(*r.label);
    row["source"] = source_name(r.source);
    out += io::dump_line(row);
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const LabelSet& labels) {
  Dataset dataset;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    TermRow base = parse_term_row(row, line, path, labels, false);
    if (!row.contains("surface") || !row["surface"].is_string()) {
      throw DataError(where(path, line) + ": row needs a string field 'surface'");
    }
    AugmentedRecord rec;
    rec.term = std::move(base.term);
    rec.surface = row["surface"].get<std::string>();
    rec.label = base.label;
    rec.source = parse_source(row.value("source", std::string("Original")));
    try {
      dataset.add(std::move(rec));
    } catch (const DataError& e) {
      throw DataError(where(path, line) + ": " + e.what());
    }
  });
  return dataset;
}

std::vector<TermOccurrences> group_by_term(const Dataset& dataset) {
  std::vector<TermOccurrences> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : dataset.records()) {
    auto [it, inserted] = index.emplace(r.term, out.size());
    if (inserted) out.push_back(TermOccurrences{r.term, {}});
    out[it->second].surfaces.push_back(r.surface);
  }
  return out;
}

}  // namespace hyprank::corpus
