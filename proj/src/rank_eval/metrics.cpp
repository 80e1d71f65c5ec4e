#include <unordered_map>

#include "hyprank/error.hpp"
#include "hyprank/io.hpp"
#include "hyprank/rank_eval.hpp"

namespace hyprank::rank_eval {
namespace {

std::vector<std::size_t> positions(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds) {
  if (gold.size() != preds.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " instances but there are " +
                    std::to_string(preds.size()) + " predictions");
  }
  if (gold.empty()) throw DataError("nothing to evaluate");
  std::vector<std::size_t> out;
  out.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].term != preds[i].term) {
      throw DataError("instance " + std::to_string(i) + ": gold term '" + gold[i].term + "' vs predicted term '" +
                      preds[i].term + "'");
    }
    out.push_back(position_of(preds[i], gold[i].label));
  }
  return out;
}

}  // namespace

double accuracy(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds) {
  return evaluate(gold, preds).accuracy;
}

double mean_rank(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds) {
  return evaluate(gold, preds).mean_rank;
}

EvalReport evaluate(const std::vector<GoldInstance>& gold, const std::vector<RankedPrediction>& preds) {
  const auto pos = positions(gold, preds);
  std::size_t hits = 0, sum = 0;
  for (std::size_t p : pos) {
    hits += p == 1 ? 1 : 0;
    sum += p;
  }
  const double n = static_cast<double>(pos.size());
  return EvalReport{static_cast<double>(hits) / n, static_cast<double>(sum) / n, pos.size()};
}

std::vector<RankedPrediction> align_predictions(const std::vector<GoldInstance>& gold,
                                                const std::vector<RankedPrediction>& preds) {
  std::unordered_map<std::string, const RankedPrediction*> by_term;
  for (const auto& p : preds) {
    if (!by_term.emplace(p.term, &p).second) throw DataError("duplicate prediction for term '" + p.term + "'");
  }
  std::vector<RankedPrediction> out;
  out.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = by_term.find(g.term);
    if (it == by_term.end()) throw DataError("no prediction for term '" + g.term + "'");
    out.push_back(*it->second);
  }
  return out;
}

std::string serialize_predictions(const std::vector<RankedPrediction>& preds, const corpus::LabelSet& labels) {
  std::string out;
  for (const auto& p : preds) {
    io::json row;
    row["term"] = p.term;
    io::json names = io::json::array();
    for (auto id : p.ranked_labels) names.push_back(labels.name(id));
    row["ranked_labels"] = std::move(names);
    row["scores"] = p.scores;
    out += io::dump_line(row);
    out += '\n';
  }
  return out;
}

std::vector<RankedPrediction> load_predictions(const std::filesystem::path& path, const corpus::LabelSet& labels) {
  std::vector<RankedPrediction> out;
  io::read_jsonl(path, [&](const io::json& row, std::size_t line) {
    const std::string where = path.string() + ":" + std::to_string(line) + ": ";
    try {
      RankedPrediction p;
      p.term = row.at("term").get<std::string>();
      for (const auto& name : row.at("ranked_labels")) {
        auto id = labels.find(name.get<std::string>());
        if (!id) throw DataError("unknown label '" + name.get<std::string>() + "'");
        p.ranked_labels.push_back(*id);
      }
      p.scores = row.at("scores").get<std::vector<double>>();
      validate_prediction(p, labels.size());
      out.push_back(std::move(p));
    } catch (const io::json::exception& e) {
      throw DataError(where + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  });
  return out;
}

std::string report_json(const EvalReport& report) {
  io::json j;
  j["accuracy"] = report.accuracy;
  j["mean_rank"] = report.mean_rank;
  j["n"] = report.n;
  return j.dump(2) + "\n";
}

}  // namespace hyprank::rank_eval
