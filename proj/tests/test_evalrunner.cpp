#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "hextm/errors.hpp"
#include "hextm/evalrunner.hpp"
#include "hextm/json_io.hpp"
#include "hextm/model_io.hpp"
#include "oracles.hpp"

using namespace hextm;

namespace {

std::vector<DatasetRecord> labelled(int n, int black_every) {
  std::vector<DatasetRecord> out;
  std::mt19937_64 rng(1);
  for (int i = 0; i < n; ++i) {
    const int moves = i % 30;
    out.push_back({encode(oracle::random_legal(rng, 6, moves)), i % black_every == 0 ? 1 : 0, moves});
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("split is a seeded partition with the requested size") {
  const auto records = labelled(1000, 3);
  SplitConfig cfg;
  const DataSplit a = split(records, cfg);
  CHECK(a.train.size() == 670);
  CHECK(a.test.size() == 330);
  std::multiset<std::string> all, parts;
  for (const auto& r : records) all.insert(r.features.to_bits() + std::to_string(r.label));
  for (const auto* side : {&a.train, &a.test}) {
    for (const auto& r : *side) parts.insert(r.features.to_bits() + std::to_string(r.label));
  }
  CHECK(all == parts);
  const DataSplit b = split(records, cfg);
  for (std::size_t i = 0; i < a.train.size(); ++i) REQUIRE(a.train[i].features == b.train[i].features);
  cfg.seed = 2;
  const DataSplit c = split(records, cfg);
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) differs |= !(a.train[i].features == c.train[i].features);
  CHECK(differs);
}

TEST_CASE("stratified split keeps label proportions") {
  const auto records = labelled(900, 3);  // 300 Black
  SplitConfig cfg;
  cfg.stratified = true;
  cfg.train_fraction = 0.5;
  const DataSplit s = split(records, cfg);
  CHECK(class_counts(s.train).at(1) == 150);
  CHECK(class_counts(s.test).at(1) == 150);
  const auto one_label = labelled(10, 1);
  CHECK_THROWS_AS(split(one_label, cfg), ContractViolation);
}

TEST_CASE("split rejects degenerate requests") {
  const auto records = labelled(10, 2);
  SplitConfig cfg;
  cfg.train_fraction = 1.0;
  CHECK_THROWS_AS(split(records, cfg), ContractViolation);
  cfg.train_fraction = 0.0;
  CHECK_THROWS_AS(split(records, cfg), ContractViolation);
  cfg.train_fraction = 0.01;
  CHECK_THROWS_AS(split(records, cfg), ContractViolation);  // rounds to an empty training side
  CHECK_THROWS_AS(split(labelled(1, 2), SplitConfig{}), ContractViolation);
}

TEST_CASE("evaluation groups by move count and sums to the overall result") {
  std::mt19937_64 rng(3);
  TMConfig tm;
  tm.n_clauses = 20;
  tm.threshold = 10;
  const ClauseBank bank = oracle::random_bank(rng, tm, 72, 0.02);
  const auto records = labelled(400, 2);
  const Evaluation ev = evaluate(bank, records);
  std::int64_t n = 0, correct = 0, recount = 0;
  for (const auto& [m, g] : ev.per_move_count) {
    n += g.n;
    correct += g.correct;
  }
  for (const auto& r : records) recount += (oracle::naive_vote_sum(bank, r.features) >= 0 ? 1 : 0) == r.label;
  CHECK(n == 400);
  CHECK(correct == ev.overall.correct);
  CHECK(ev.overall.correct == recount);
  CHECK(ev.per_move_count.size() == 30);
  CHECK_THROWS_AS(evaluate(bank, std::vector<DatasetRecord>{}), ContractViolation);
}

TEST_CASE("majority baseline uses the test split") {
  EvalReport r;
  r.test_class_counts = {{0, 30}, {1, 70}};
  CHECK(r.majority_baseline() == doctest::Approx(0.7));
  r.test_class_counts = {{0, 0}, {1, 0}};
  CHECK(r.majority_baseline() == 0.0);
}

TEST_CASE("experiment runs are reproducible to the byte") {
  oracle::TempDir dir("exp");
  ExperimentPlan plan;
  plan.gen.n_games = 30;
  plan.gen.playouts_per_move = 5;
  plan.gen.seed = 3;
  plan.tm.n_clauses = 40;
  plan.tm.threshold = 20;
  plan.tm.specificity = 5.0;
  plan.tm.epochs = 4;
  std::vector<std::string> log;
  for (const char* run : {"a", "b"}) {
    plan.dataset_out = dir / (std::string(run) + ".data");
    plan.model_out = dir / (std::string(run) + ".model");
    plan.report_out = dir / (std::string(run) + ".json");
    const auto result = run_experiment(plan, [&](const std::string& m) { log.push_back(m); });
    CHECK(result.report.epoch_accuracy.size() == 4);
    CHECK(result.report.train_accuracy == result.report.epoch_accuracy.back());
    CHECK(result.report.gen_config.has_value());
    CHECK(load_model(*plan.model_out) == result.bank);
  }
  CHECK(slurp(dir / "a.data") == slurp(dir / "b.data"));
  CHECK(slurp(dir / "a.model") == slurp(dir / "b.model"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(std::count_if(log.begin(), log.end(), [](const std::string& m) { return m.rfind("epoch", 0) == 0; }) == 8);

  // Loading the written dataset instead of regenerating gives the same model.
  ExperimentPlan reload = plan;
  reload.dataset_in = dir / "a.data";
  reload.dataset_out.reset();
  reload.model_out = dir / "c.model";
  reload.report_out.reset();
  run_experiment(reload);
  CHECK(slurp(dir / "a.model") == slurp(dir / "c.model"));
}

TEST_CASE("report JSON round-trips and the table lists every move count") {
  oracle::TempDir dir("report");
  ExperimentPlan plan;
  plan.gen.n_games = 10;
  plan.gen.playouts_per_move = 3;
  plan.tm.n_clauses = 20;
  plan.tm.threshold = 10;
  plan.tm.epochs = 2;
  plan.report_out = dir / "r.json";
  const auto result = run_experiment(plan);
  const EvalReport back = load_report(dir / "r.json");
  CHECK(to_json(back).dump() == to_json(result.report).dump());
  CHECK(back.tm_config == plan.tm);
  const std::string table = format_report_table(result.report);
  CHECK(table.find("Clauses = 20, T = 10, s = 100") != std::string::npos);
  for (const auto& [m, g] : result.report.test_per_move_count) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "\n%5d |", m);
    CHECK(table.find(prefix) != std::string::npos);
  }
  std::ofstream(dir / "bad.json") << "{";
  CHECK_THROWS_AS(load_report(dir / "bad.json"), ParseError);
}

TEST_CASE("config JSON converters round-trip") {
  TMConfig tm;
  tm.n_clauses = 2000;
  tm.threshold = 1600;
  tm.specificity = 3.9;
  tm.weighted = true;
  tm.seed = 123456789012345ULL;
  CHECK(tm_config_from_json(to_json(tm)) == tm);
  SplitConfig sc{0.8, 9, true};
  const SplitConfig back = split_config_from_json(to_json(sc));
  CHECK(back.train_fraction == sc.train_fraction);
  CHECK(back.seed == 9);
  CHECK(back.stratified);
  GenConfig gc;
  gc.min_moves = 4;
  gc.max_moves = 9;
  const GenConfig g2 = gen_config_from_json(to_json(gc));
  CHECK(g2.min_moves == 4);
  CHECK(g2.max_moves == 9);
  CHECK(to_json(tm)["T"] == 1600);
}
