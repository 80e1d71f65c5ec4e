#pragma once

// Label hierarchy (a forest whose leaves are exactly the active labels) and
// the graded label-pair similarity derived from it.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyprank/corpus.hpp"

namespace hyprank::taxonomy {

struct TaxonomyNode {
  std::string name;
  std::vector<TaxonomyNode> children;
};

class Taxonomy {
 public:
  // Validates that node names are unique and the leaf names equal `labels`.
  // Throws DataError listing every difference.
  Taxonomy(std::vector<TaxonomyNode> roots, const corpus::LabelSet& labels);

  const std::vector<TaxonomyNode>& roots() const { return roots_; }
  // root -> ... -> leaf names for the label.
  const std::vector<std::string>& path(corpus::LabelId label) const;
  const corpus::LabelSet& labels() const { return labels_; }

 private:
  std::vector<TaxonomyNode> roots_;
  corpus::LabelSet labels_;
  std::vector<std::vector<std::string>> leaf_paths_;
};

// Accepts {"name", "children"} or an array of such roots.
Taxonomy taxonomy_from_json(const nlohmann::json& doc, const corpus::LabelSet& labels);
Taxonomy load_taxonomy(const std::filesystem::path& path, const corpus::LabelSet& labels);

struct RootAndChild {
  std::string root;
  std::string first_child;  // the label itself when it hangs directly off the root
};

RootAndChild root_and_first_child(const Taxonomy& t, corpus::LabelId label);

// 1 for the same label, 0 across roots, k for a shared root only, 2k when
// the depth-1 ancestor is shared too. Requires 0 < k < 0.5.
double pair_score(const Taxonomy& t, corpus::LabelId a, corpus::LabelId b, double k);

void check_k(double k);  // throws ConfigError outside (0, 0.5)

}  // namespace hyprank::taxonomy
