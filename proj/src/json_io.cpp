#include "hextm/json_io.hpp"

#include <string>

namespace hextm {

namespace {

Json groups_json(const std::map<int, GroupAccuracy>& groups) {
  Json out = Json::object();
  for (const auto& [moves, g] : groups) {
    out[std::to_string(moves)] = {{"n", g.n}, {"correct", g.correct}, {"accuracy", g.accuracy()}};
  }
  return out;
}

std::map<int, GroupAccuracy> groups_from_json(const Json& j) {
  std::map<int, GroupAccuracy> out;
  for (const auto& [key, value] : j.items()) {
    out[std::stoi(key)] = {value.at("n").get<std::int64_t>(), value.at("correct").get<std::int64_t>()};
  }
  return out;
}

Json counts_json(const std::map<int, std::int64_t>& counts) {
  Json out = Json::object();
  for (const auto& [label, n] : counts) out[std::to_string(label)] = n;
  return out;
}

std::map<int, std::int64_t> counts_from_json(const Json& j) {
  std::map<int, std::int64_t> out;
  for (const auto& [key, value] : j.items()) out[std::stoi(key)] = value.get<std::int64_t>();
  return out;
}

}  // namespace

Json to_json(const TMConfig& c) {
  return {{"nClauses", c.n_clauses},
          {"T", c.threshold},
          {"s", c.specificity},
          {"nStatesPerAction", c.states_per_action},
          {"boostTruePositives", c.boost_true_positives},
          {"weighted", c.weighted},
          {"maxWeight", c.max_weight},
          {"epochs", c.epochs},
          {"seed", c.seed}};
}

TMConfig tm_config_from_json(const Json& j) {
  TMConfig c;
  c.n_clauses = j.at("nClauses").get<int>();
  c.threshold = j.at("T").get<int>();
  c.specificity = j.at("s").get<double>();
  c.states_per_action = j.at("nStatesPerAction").get<int>();
  c.boost_true_positives = j.at("boostTruePositives").get<bool>();
  c.weighted = j.at("weighted").get<bool>();
  c.max_weight = j.at("maxWeight").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Json to_json(const SplitConfig& c) {
  return {{"trainFraction", c.train_fraction}, {"seed", c.seed}, {"stratified", c.stratified}};
}

SplitConfig split_config_from_json(const Json& j) {
  return {j.at("trainFraction").get<double>(), j.at("seed").get<std::uint64_t>(), j.at("stratified").get<bool>()};
}

Json to_json(const GenConfig& c) {
  return {{"nGames", c.n_games},
          {"playoutsPerMove", c.playouts_per_move},
          {"snapshotRange", {c.min_moves, c.max_moves}},
          {"seed", c.seed},
          {"boardSize", c.board_size}};
}

GenConfig gen_config_from_json(const Json& j) {
  GenConfig c;
  c.n_games = j.at("nGames").get<int>();
  c.playouts_per_move = j.at("playoutsPerMove").get<int>();
  c.min_moves = j.at("snapshotRange").at(0).get<int>();
  c.max_moves = j.at("snapshotRange").at(1).get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.board_size = j.at("boardSize").get<int>();
  return c;
}

Json to_json(const EvalReport& r) {
  Json config = {{"tm", to_json(r.tm_config)}, {"split", to_json(r.split_config)}};
  if (r.gen_config) config["gen"] = to_json(*r.gen_config);
  return {{"format", "hextm-report v1"},
          {"trainAccuracy", r.train_accuracy},
          {"testAccuracy", r.test_accuracy},
          {"trainSize", r.train_size},
          {"testSize", r.test_size},
          {"majorityBaseline", r.majority_baseline()},
          {"classCounts", counts_json(r.class_counts)},
          {"testClassCounts", counts_json(r.test_class_counts)},
          {"perMoveCount", {{"train", groups_json(r.train_per_move_count)}, {"test", groups_json(r.test_per_move_count)}}},
          {"epochAccuracy", r.epoch_accuracy},
          {"config", config}};
}

EvalReport report_from_json(const Json& j) {
  EvalReport r;
  r.train_accuracy = j.at("trainAccuracy").get<double>();
  r.test_accuracy = j.at("testAccuracy").get<double>();
  r.train_size = j.at("trainSize").get<std::int64_t>();
  r.test_size = j.at("testSize").get<std::int64_t>();
  r.class_counts = counts_from_json(j.at("classCounts"));
  r.test_class_counts = counts_from_json(j.at("testClassCounts"));
  r.train_per_move_count = groups_from_json(j.at("perMoveCount").at("train"));
  r.test_per_move_count = groups_from_json(j.at("perMoveCount").at("test"));
  r.epoch_accuracy = j.at("epochAccuracy").get<std::vector<double>>();
  const Json& config = j.at("config");
  r.tm_config = tm_config_from_json(config.at("tm"));
  r.split_config = split_config_from_json(config.at("split"));
  if (config.contains("gen")) r.gen_config = gen_config_from_json(config.at("gen"));
  return r;
}

Json prediction_json(const Prediction& p) {
  return {{"label", p.label == 1 ? "black" : "white"}, {"voteSum", p.vote_sum}, {"margin", p.margin}};
}

Json heatmap_json(const Heatmap& h) {
  Json out = {{"blackCounts", h.black_counts}, {"whiteCounts", h.white_counts}};
  if (!h.forbid_black_counts.empty()) {
    out["diagnostic"] = {{"note", "negated-literal counts; not part of the standard aggregation"},
                         {"forbidBlackCounts", h.forbid_black_counts},
                         {"forbidWhiteCounts", h.forbid_white_counts}};
  }
  out["prediction"] = prediction_json(h.prediction);
  return out;
}

Json ranked_clause_json(const RankedClause& c) {
  Json literals = Json::array();
  for (const auto& lit : c.pattern.literals()) {
    literals.push_back((lit.negated ? "!x" : "x") + std::to_string(lit.feature + 1));
  }
  return {{"clause", c.clause},
          {"polarity", to_string(c.stats.polarity)},
          {"score", c.score},
          {"precision", c.stats.precision()},
          {"coverage", c.stats.coverage()},
          {"tp", c.stats.true_positives},
          {"fp", c.stats.false_positives},
          {"fn", c.stats.false_negatives},
          {"weight", c.weight},
          {"literals", literals},
          {"pattern", render_pattern(c.pattern)}};
}

Json top_clauses_json(const TopClauses& top, Polarity polarity, int k, double alpha) {
  Json entries = Json::array();
  for (const auto& c : top.clauses) entries.push_back(ranked_clause_json(c));
  return {{"polarity", to_string(polarity)}, {"k", k}, {"alpha", alpha}, {"truncated", top.truncated},
          {"clauses", entries}};
}

}  // namespace hextm
