#include "hextm/evalrunner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hextm/errors.hpp"
#include "hextm/json_io.hpp"
#include "hextm/model_io.hpp"

namespace hextm {

namespace {

std::size_t train_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

void SplitConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ContractViolation("train fraction must lie in (0, 1)");
}

DataSplit split(std::span<const DatasetRecord> records, const SplitConfig& config) {
  config.validate();
  if (records.size() < 2) throw ContractViolation("split: need at least two records");
  Rng rng(config.seed);
  std::vector<std::size_t> train_idx, test_idx;

  if (config.stratified) {
    std::array<std::vector<std::size_t>, 2> by_label;
    for (std::size_t i = 0; i < records.size(); ++i) by_label[static_cast<std::size_t>(records[i].label)].push_back(i);
    if (by_label[0].empty() || by_label[1].empty()) {
      throw ContractViolation("split: stratified split needs both labels present");
    }
    for (auto& group : by_label) {
      std::shuffle(group.begin(), group.end(), rng);
      const std::size_t cut = train_count(group.size(), config.train_fraction);
      train_idx.insert(train_idx.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(cut));
      test_idx.insert(test_idx.end(), group.begin() + static_cast<std::ptrdiff_t>(cut), group.end());
    }
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    std::shuffle(test_idx.begin(), test_idx.end(), rng);
  } else {
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t cut = train_count(order.size(), config.train_fraction);
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  }
  if (train_idx.empty() || test_idx.empty()) throw ContractViolation("split: one side of the split is empty");

  DataSplit out;
  out.train.reserve(train_idx.size());
  out.test.reserve(test_idx.size());
  for (auto i : train_idx) out.train.push_back(records[i]);
  for (auto i : test_idx) out.test.push_back(records[i]);
  return out;
}

Evaluation evaluate(const ClauseBank& bank, std::span<const DatasetRecord> records) {
  if (records.empty()) throw ContractViolation("evaluate: empty dataset");
  Evaluation ev;
  for (const auto& rec : records) {
    const bool hit = predict(bank, rec.features).label == rec.label;
    auto& group = ev.per_move_count[rec.move_count];
    ++group.n;
    ++ev.overall.n;
    group.correct += hit;
    ev.overall.correct += hit;
  }
  return ev;
}

std::map<int, std::int64_t> class_counts(std::span<const DatasetRecord> records) {
  std::map<int, std::int64_t> counts{{0, 0}, {1, 0}};
  for (const auto& r : records) ++counts[r.label];
  return counts;
}

double EvalReport::majority_baseline() const {
  std::int64_t total = 0, best = 0;
  for (const auto& [label, n] : test_class_counts) {
    total += n;
    best = std::max(best, n);
  }
  return total == 0 ? 0.0 : static_cast<double>(best) / static_cast<double>(total);
}

std::string format_report_table(const EvalReport& r) {
  std::ostringstream out;
  const auto& c = r.tm_config;
  std::ostringstream hyper;
  hyper << "Clauses = " << c.n_clauses << ", T = " << c.threshold << ", s = " << c.specificity;
  if (c.weighted) hyper << ", max weight=" << c.max_weight;

  out << "Method          | Hyperparameter                               | Training Accuracy | Testing Accuracy\n";
  out << "----------------+----------------------------------------------+-------------------+-----------------\n";
  char row[256];
  std::snprintf(row, sizeof row, "%-15s | %-44s | %17s | %16s\n", "Tsetlin Machine", hyper.str().c_str(),
                percent(r.train_accuracy).c_str(), percent(r.test_accuracy).c_str());
  out << row << '\n';

  out << "moves | train n | train acc | test n | test acc\n";
  std::map<int, std::pair<GroupAccuracy, GroupAccuracy>> rows;
  for (const auto& [m, g] : r.train_per_move_count) rows[m].first = g;
  for (const auto& [m, g] : r.test_per_move_count) rows[m].second = g;
  for (const auto& [m, g] : rows) {
    std::snprintf(row, sizeof row, "%5d | %7lld | %9s | %6lld | %8s\n", m, static_cast<long long>(g.first.n),
                  g.first.n ? percent(g.first.accuracy()).c_str() : "-", static_cast<long long>(g.second.n),
                  g.second.n ? percent(g.second.accuracy()).c_str() : "-");
    out << row;
  }
  out << "\nclass counts: black=" << r.class_counts.at(1) << " white=" << r.class_counts.at(0)
      << "  majority baseline (test) " << percent(r.majority_baseline()) << "%\n";
  return out.str();
}

EvalReport report_for(const ClauseBank& bank, std::span<const DatasetRecord> records) {
  const Evaluation ev = evaluate(bank, records);
  EvalReport r;
  r.test_accuracy = ev.overall.accuracy();
  r.test_size = ev.overall.n;
  r.test_per_move_count = ev.per_move_count;
  r.class_counts = class_counts(records);
  r.test_class_counts = r.class_counts;
  r.tm_config = bank.config();
  return r;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, const ProgressFn& progress) {
  auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  plan.tm.validate();
  plan.split.validate();

  std::vector<DatasetRecord> records;
  std::optional<GenConfig> generated;
  if (plan.dataset_in) {
    records = read_dataset(*plan.dataset_in);
    say("loaded " + std::to_string(records.size()) + " records from " + plan.dataset_in->string());
  } else {
    records = generate_dataset(plan.gen);
    generated = plan.gen;
    say("generated " + std::to_string(records.size()) + " records from " + std::to_string(plan.gen.n_games) +
        " games");
    if (plan.dataset_out) write_dataset(records, *plan.dataset_out);
  }

  DataSplit parts = split(records, plan.split);
  say("split: " + std::to_string(parts.train.size()) + " train / " + std::to_string(parts.test.size()) + " test");

  ClauseBank bank = ClauseBank::initialized(plan.tm, encode(Board()).size());
  const auto train_examples = to_examples(parts.train);
  const FitResult fitted = fit(bank, train_examples, [&](int epoch, double acc) {
    say("epoch " + std::to_string(epoch) + " train accuracy " + percent(acc) + "%");
  });

  const Evaluation train_ev = evaluate(bank, parts.train);
  const Evaluation test_ev = evaluate(bank, parts.test);
  EvalReport r;
  r.train_accuracy = train_ev.overall.accuracy();
  r.test_accuracy = test_ev.overall.accuracy();
  r.train_size = train_ev.overall.n;
  r.test_size = test_ev.overall.n;
  r.train_per_move_count = train_ev.per_move_count;
  r.test_per_move_count = test_ev.per_move_count;
  r.class_counts = class_counts(records);
  r.test_class_counts = class_counts(parts.test);
  r.epoch_accuracy = fitted.epoch_accuracy;
  r.tm_config = plan.tm;
  r.split_config = plan.split;
  r.gen_config = generated;

  if (plan.model_out) save_model(bank, *plan.model_out);
  if (plan.report_out) save_report(r, *plan.report_out);
  return {std::move(r), std::move(bank)};
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file for writing: " + path.string());
  out << to_json(report).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing report file: " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report file: " + path.string());
  try {
    return report_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace hextm
