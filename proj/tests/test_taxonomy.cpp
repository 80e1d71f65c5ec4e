#include <doctest.h>

#include <functional>
#include <map>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/taxonomy.hpp"
#include "support.hpp"

using namespace hyprank;
using namespace hyprank::taxonomy;
using corpus::LabelSet;

namespace {

// Root-to-leaf name paths read straight from the JSON document.
std::map<std::string, std::vector<std::string>> oracle_paths(const io::json& doc) {
  std::map<std::string, std::vector<std::string>> out;
  std::function<void(const io::json&, std::vector<std::string>)> walk = [&](const io::json& n,
                                                                             std::vector<std::string> trail) {
    trail.push_back(n["name"].get<std::string>());
    if (!n.contains("children") || n["children"].empty()) {
      out[trail.back()] = trail;
      return;
    }
    for (const auto& c : n["children"]) walk(c, trail);
  };
  if (doc.is_array()) {
    for (const auto& r : doc) walk(r, {});
  } else {
    walk(doc, {});
  }
  return out;
}

double oracle_score(const std::vector<std::string>& a, const std::vector<std::string>& b, double k) {
  if (a == b) return 1.0;
  if (a[0] != b[0]) return 0.0;
  const std::string& ca = a.size() >= 2 ? a[1] : a[0];
  const std::string& cb = b.size() >= 2 ? b[1] : b[0];
  return ca == cb ? 2.0 * k : k;
}

LabelSet labels_of(const std::map<std::string, std::vector<std::string>>& paths) {
  std::vector<std::string> names;
  for (const auto& [leaf, path] : paths) names.push_back(leaf);
  return names.size() == corpus::kNumFinsimLabels ? LabelSet::finsim() : LabelSet::subset(names);
}

}  // namespace

TEST_CASE("pair_score agrees with a path oracle on every fixture") {
  const std::vector<std::filesystem::path> files = {
      testing::fixture("taxonomies/toy.json"), testing::fixture("taxonomies/shallow.json"),
      testing::fixture("taxonomies/forest.json"), testing::fixture("taxonomies/deep.json"),
      testing::data_file("taxonomy_default.json")};
  for (const auto& file : files) {
    CAPTURE(file.string());
    const io::json doc = io::read_json(file);
    const auto paths = oracle_paths(doc);
    const LabelSet labels = labels_of(paths);
    const Taxonomy t = load_taxonomy(file, labels);
    for (double k : {0.1, 0.25, 0.4, 0.49}) {
      for (auto a : labels.ids()) {
        CHECK(t.path(a) == paths.at(labels.name(a)));
        for (auto b : labels.ids()) {
          const double s = pair_score(t, a, b, k);
          CHECK(s == oracle_score(paths.at(labels.name(a)), paths.at(labels.name(b)), k));
          CHECK(s == pair_score(t, b, a, k));
          CHECK((s == 0.0 || s == k || s == 2.0 * k || s == 1.0));
        }
      }
    }
  }
}

TEST_CASE("default tree: symmetric with unit self-score over all 17 x 17 pairs") {
  const LabelSet labels = LabelSet::finsim();
  const Taxonomy t = load_taxonomy(testing::data_file("taxonomy_default.json"), labels);
  for (auto a : labels.ids()) {
    CHECK(pair_score(t, a, a, 0.4) == 1.0);
    for (auto b : labels.ids()) CHECK(pair_score(t, a, b, 0.4) == pair_score(t, b, a, 0.4));
  }
  CHECK(pair_score(t, labels.at("Bonds"), labels.at("MMIs"), 0.4) == 0.8);
  CHECK(pair_score(t, labels.at("Bonds"), labels.at("Stocks"), 0.4) == 0.4);
  CHECK(pair_score(t, labels.at("Bonds"), labels.at("Swap"), 0.4) == 0.0);
}

TEST_CASE("root and first child") {
  const LabelSet toy = LabelSet::subset({"Bonds", "Swap", "Funds"});
  const Taxonomy t = load_taxonomy(testing::fixture("taxonomies/toy.json"), toy);
  CHECK(root_and_first_child(t, toy.at("Bonds")).root == "root");
  CHECK(root_and_first_child(t, toy.at("Bonds")).first_child == "A");
  CHECK(root_and_first_child(t, toy.at("Funds")).first_child == "B");
  CHECK(pair_score(t, toy.at("Bonds"), toy.at("Swap"), 0.4) == 0.8);
  CHECK(pair_score(t, toy.at("Bonds"), toy.at("Funds"), 0.4) == 0.4);

  const LabelSet sh = LabelSet::subset({"Stocks", "Bonds", "Option", "Future"});
  const Taxonomy s = load_taxonomy(testing::fixture("taxonomies/shallow.json"), sh);
  CHECK(root_and_first_child(s, sh.at("Stocks")).first_child == "Stocks");
  CHECK(pair_score(s, sh.at("Stocks"), sh.at("Bonds"), 0.4) == 0.4);
}

TEST_CASE("validation errors name the problem") {
  auto message = [](const std::string& json_text, const LabelSet& labels) -> std::string {
    try {
      taxonomy_from_json(io::json::parse(json_text), labels);
    } catch (const DataError& e) {
      return e.what();
    }
    return {};
  };
  const LabelSet toy = LabelSet::subset({"Bonds", "Swap", "Funds"});
  CHECK(message(R"({"name": "r", "children": [{"name": "Bonds"}, {"name": "Swap"}]})", toy).find("Funds") !=
        std::string::npos);
  CHECK(message(R"({"name": "r", "children": [{"name": "Bonds"}, {"name": "Swap"}, {"name": "Funds"}, {"name": "Loans"}]})",
                toy)
            .find("Loans") != std::string::npos);
  CHECK_FALSE(message(R"({"name": "r", "children": [{"name": "A", "children": [{"name": "Bonds"}]}, {"name": "A", "children": [{"name": "Swap"}, {"name": "Funds"}]}]})",
                      toy)
                  .empty());
  CHECK_FALSE(message(R"({"name": "r", "children": [{"name": "Bonds"}, {"name": "Bonds"}, {"name": "Swap"}, {"name": "Funds"}]})",
                      toy)
                  .empty());
  CHECK_FALSE(message(R"({"children": []})", toy).empty());

  io::json full = io::read_json(testing::data_file("taxonomy_default.json"));
  auto& contracts = full[2]["children"][0]["children"];
  for (auto it = contracts.begin(); it != contracts.end(); ++it) {
    if ((*it)["name"] == "Option") {
      contracts.erase(it);
      break;
    }
  }
  CHECK(message(full.dump(), LabelSet::finsim()).find("Option") != std::string::npos);
}

TEST_CASE("k must lie strictly between 0 and 0.5") {
  const LabelSet toy = LabelSet::subset({"Bonds", "Swap", "Funds"});
  const Taxonomy t = load_taxonomy(testing::fixture("taxonomies/toy.json"), toy);
  CHECK_THROWS_AS(pair_score(t, toy.at("Bonds"), toy.at("Swap"), 0.5), ConfigError);
  CHECK_THROWS_AS(pair_score(t, toy.at("Bonds"), toy.at("Swap"), 0.0), ConfigError);
  CHECK_THROWS_AS(check_k(0.6), ConfigError);
  CHECK_NOTHROW(check_k(0.4));
}
