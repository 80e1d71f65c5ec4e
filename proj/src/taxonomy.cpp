#include "hyprank/taxonomy.hpp"

#include <map>
#include <set>
#include <sstream>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"

namespace hyprank::taxonomy {
namespace {

TaxonomyNode parse_node(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) {
    throw DataError("taxonomy node needs a string 'name'");
  }
  TaxonomyNode node{j["name"].get<std::string>(), {}};
  if (node.name.empty()) throw DataError("taxonomy node with empty name");
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw DataError("'children' of '" + node.name + "' must be an array");
    for (const auto& c : j["children"]) node.children.push_back(parse_node(c));
  }
  return node;
}

void walk(const TaxonomyNode& node, std::vector<std::string>& trail,
          std::map<std::string, int>& name_counts, std::map<std::string, std::vector<std::string>>& leaves) {
  ++name_counts[node.name];
  trail.push_back(node.name);
  if (node.children.empty()) {
    leaves.emplace(node.name, trail);
  } else {
    for (const auto& c : node.children) walk(c, trail, name_counts, leaves);
  }
  trail.pop_back();
}

}  // namespace

Taxonomy::Taxonomy(std::vector<TaxonomyNode> roots, const corpus::LabelSet& labels)
    : roots_(std::move(roots)), labels_(labels), leaf_paths_(labels.size()) {
  std::map<std::string, int> name_counts;
  std::map<std::string, std::vector<std::string>> leaves;
  std::vector<std::string> trail;
  for (const auto& r : roots_) walk(r, trail, name_counts, leaves);

  std::vector<std::string> duplicated, missing, extra;
  for (const auto& [name, count] : name_counts) {
    if (count > 1) duplicated.push_back(name);
  }
  for (const auto& name : labels.names()) {
    if (!leaves.count(name)) missing.push_back(name);
  }
  for (const auto& [name, p] : leaves) {
    if (!labels.find(name)) extra.push_back(name);
  }
  if (roots_.empty() || !duplicated.empty() || !missing.empty() || !extra.empty()) {
    std::ostringstream os;
    os << "invalid taxonomy:";
    if (roots_.empty()) os << " no root;";
    auto list = [&](const char* what, const std::vector<std::string>& items) {
      if (items.empty()) return;
      os << ' ' << what << ':';
      for (const auto& s : items) os << " '" << s << "'";
      os << ';';
    };
    list("duplicate node names", duplicated);
    list("missing leaves", missing);
    list("leaves that are not labels", extra);
    std::string msg = os.str();
    msg.pop_back();
    throw DataError(msg);
  }
  for (const auto& [name, p] : leaves) leaf_paths_[labels.at(name).index] = p;
}

const std::vector<std::string>& Taxonomy::path(corpus::LabelId label) const {
  if (label.index >= leaf_paths_.size()) throw DataError("label index out of range for taxonomy");
  return leaf_paths_[label.index];
}

Taxonomy taxonomy_from_json(const nlohmann::json& doc, const corpus::LabelSet& labels) {
  std::vector<TaxonomyNode> roots;
  if (doc.is_array()) {
    for (const auto& r : doc) roots.push_back(parse_node(r));
  } else {
    roots.push_back(parse_node(doc));
  }
  return Taxonomy(std::move(roots), labels);
}

Taxonomy load_taxonomy(const std::filesystem::path& path, const corpus::LabelSet& labels) {
  try {
    return taxonomy_from_json(io::read_json(path), labels);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RootAndChild root_and_first_child(const Taxonomy& t, corpus::LabelId label) {
  const auto& p = t.path(label);
  return RootAndChild{p.front(), p.size() >= 2 ? p[1] : p[0]};
}

void check_k(double k) {
  if (!(k > 0.0 && k < 0.5)) {
    std::ostringstream os;
    os << "k must lie in (0, 0.5), got " << k;
    throw ConfigError(os.str());
  }
}

double pair_score(const Taxonomy& t, corpus::LabelId a, corpus::LabelId b, double k) {
  check_k(k);
  if (a == b) return 1.0;
  RootAndChild ra = root_and_first_child(t, a);
  RootAndChild rb = root_and_first_child(t, b);
  if (ra.root != rb.root) return 0.0;
  if (ra.first_child != rb.first_child) return k;
  return 2.0 * k;
}

}  // namespace hyprank::taxonomy
