#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hextm/datagen.hpp"
#include "hextm/tsetlin.hpp"

namespace hextm {

struct SplitConfig {
  double train_fraction = 0.67;
  std::uint64_t seed = 1;
  bool stratified = false;

  void validate() const;
  friend bool operator==(const SplitConfig&, const SplitConfig&) = default;
};

struct DataSplit {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
};

// Seeded shuffle, then the first round(fraction * size) records train. In
// stratified mode each label is shuffled and cut separately, so per-class
// ratios hold to within one record. Throws ContractViolation when either
// side would be empty, or when stratifying a single-label dataset.
DataSplit split(std::span<const DatasetRecord> records, const SplitConfig& config);

struct GroupAccuracy {
  std::int64_t n = 0;
  std::int64_t correct = 0;
  double accuracy() const { return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n); }
  friend bool operator==(const GroupAccuracy&, const GroupAccuracy&) = default;
};

struct Evaluation {
  GroupAccuracy overall;
  std::map<int, GroupAccuracy> per_move_count;
};

Evaluation evaluate(const ClauseBank& bank, std::span<const DatasetRecord> records);

std::map<int, std::int64_t> class_counts(std::span<const DatasetRecord> records);

struct EvalReport {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::int64_t train_size = 0;
  std::int64_t test_size = 0;
  std::map<int, GroupAccuracy> train_per_move_count;
  std::map<int, GroupAccuracy> test_per_move_count;
  std::map<int, std::int64_t> class_counts;       // whole dataset
  std::map<int, std::int64_t> test_class_counts;
  std::vector<double> epoch_accuracy;
  TMConfig tm_config;
  SplitConfig split_config;
  std::optional<GenConfig> gen_config;  // present when the data was generated in-run

  // Accuracy of always answering the test split's most common label.
  double majority_baseline() const;
};

// Plain-text summary: the Method/Hyperparameter/Train/Test row followed by
// the per-move-count accuracy table.
std::string format_report_table(const EvalReport& report);

using ProgressFn = std::function<void(const std::string&)>;

struct ExperimentPlan {
  std::optional<std::filesystem::path> dataset_in;   // load instead of generating
  GenConfig gen;
  TMConfig tm;
  SplitConfig split;
  std::optional<std::filesystem::path> dataset_out;  // write the generated dataset
  std::optional<std::filesystem::path> model_out;
  std::optional<std::filesystem::path> report_out;   // JSON
};

struct ExperimentResult {
  EvalReport report;
  ClauseBank bank;
};

// Generate (or load) -> split -> fit -> evaluate both splits -> persist.
// Everything is a function of the seeds in the plan.
ExperimentResult run_experiment(const ExperimentPlan& plan, const ProgressFn& progress = {});

// Evaluates a saved bank against records as a test-only report.
EvalReport report_for(const ClauseBank& bank, std::span<const DatasetRecord> records);

void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

}  // namespace hextm
