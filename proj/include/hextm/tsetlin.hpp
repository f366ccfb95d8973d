#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "hextm/features.hpp"

namespace hextm {

using Rng = std::mt19937_64;

struct TMConfig {
  int n_clauses = 10000;         // half positive, half negative polarity
  int threshold = 8000;          // voting margin T
  double specificity = 100.0;    // s
  int states_per_action = 127;   // N; states run 1..2N and must fit a byte
  bool boost_true_positives = false;
  bool weighted = false;
  int max_weight = 255;
  int epochs = 200;
  std::uint64_t seed = 1;

  // Throws ContractViolation on any out-of-range field.
  void validate() const;
  friend bool operator==(const TMConfig&, const TMConfig&) = default;
};

enum class Action : std::uint8_t { Exclude, Include };
enum class Polarity : std::uint8_t { Positive, Negative };

const char* to_string(Polarity p);

// g(a) = a > N. Throws ContractViolation unless 1 <= state <= 2N.
Action action_of(int state, int states_per_action);

// 0-based feature index plus negation flag. In the n x 2o state matrix the
// literal occupies column `feature` when plain and `o + feature` when negated.
struct Literal {
  int feature = 0;
  bool negated = false;
  int column(int num_features) const { return negated ? num_features + feature : feature; }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// One bit per literal. Words 0-1 hold plain literals x_0..x_127, words 2-3
// the negated ones; bit positions line up with feature indices.
struct LiteralMask {
  std::array<std::uint64_t, 4> words{};

  bool test(const Literal& l) const {
    return (words[(l.negated ? 2 : 0) + (l.feature >> 6)] >> (l.feature & 63)) & 1U;
  }
  void set(const Literal& l) {
    words[(l.negated ? 2 : 0) + (l.feature >> 6)] |= std::uint64_t{1} << (l.feature & 63);
  }
  bool empty() const { return (words[0] | words[1] | words[2] | words[3]) == 0; }
  int count() const;
  friend bool operator==(const LiteralMask&, const LiteralMask&) = default;
};

// Literal truth values for input x: plain half = x, negated half = not x.
LiteralMask literal_values(const FeatureVector& x);

// n x 2o Tsetlin Automata states with per-clause weights. Even 0-based
// clause indices (odd in 1-based numbering) carry positive polarity.
// An include bitmask per clause mirrors g() over its row so evaluation
// never touches the byte states.
class ClauseBank {
 public:
  // Every automaton starts at N (Exclude, on the boundary), weights 1.
  ClauseBank(const TMConfig& config, int num_features);

  // Each automaton drawn uniformly from {N, N+1}; seeded from config.seed.
  static ClauseBank initialized(const TMConfig& config, int num_features);

  const TMConfig& config() const { return config_; }
  int num_clauses() const { return config_.n_clauses; }
  int num_features() const { return num_features_; }
  int num_literals() const { return 2 * num_features_; }

  Polarity polarity(int clause) const { return clause % 2 == 0 ? Polarity::Positive : Polarity::Negative; }

  int state(int clause, int column) const;
  void set_state(int clause, int column, int value);
  std::span<const std::uint8_t> row(int clause) const;

  int weight(int clause) const { return weights_[static_cast<std::size_t>(clause)]; }
  void set_weight(int clause, int weight);

  const LiteralMask& includes(int clause) const { return include_[static_cast<std::size_t>(clause)]; }

  // Conjunction over [g(a_k) => l_k]; an empty clause is true.
  bool eval_clause(int clause, const FeatureVector& x) const {
    const auto& inc = include_[static_cast<std::size_t>(clause)].words;
    const auto& xw = x.words();
    return ((inc[0] & ~xw[0]) | (inc[1] & ~xw[1]) | (inc[2] & xw[0]) | (inc[3] & xw[1])) == 0;
  }

  // Adds +1 on `increment` columns and -1 on `decrement` columns, then clips
  // every touched state to [1, 2N].
  void add_and_clip(int clause, const LiteralMask& increment, const LiteralMask& decrement);

  friend bool operator==(const ClauseBank&, const ClauseBank&) = default;

 private:
  void check_clause(int clause) const;

  TMConfig config_;
  int num_features_;
  std::vector<std::uint8_t> states_;
  std::vector<LiteralMask> include_;
  std::vector<int> weights_;
};

struct Prediction {
  int label = 1;        // 1 = Black wins, 0 = White wins
  int vote_sum = 0;
  double margin = 0.0;  // vote_sum / T clamped to [-1, 1]
};

// Weighted positive votes minus weighted negative votes.
int vote_sum(const ClauseBank& bank, const FeatureVector& x);

// Label 1 iff vote_sum >= 0.
Prediction predict(const ClauseBank& bank, const FeatureVector& x);

// epsilon / 2T with v clamped to [-T, T]; epsilon = T - v for y = 1, T + v for y = 0.
double feedback_probability(int vote_sum, int label, int threshold);

// F^Ia (increment) and F^Ib (decrement) rows, or F^II in `increment` alone.
struct FeedbackRows {
  LiteralMask increment;
  LiteralMask decrement;
};

// Draws one Type I feedback row for `clause` per the Type I table.
FeedbackRows type_i_feedback(const ClauseBank& bank, int clause, const FeatureVector& x, Rng& rng);

// Type II is deterministic: Exclude automata of 0-valued literals in a
// firing clause are pushed one step toward Include.
FeedbackRows type_ii_feedback(const ClauseBank& bank, int clause, const FeatureVector& x);

// One online update on (x, y). The vote sum is taken once from the
// pre-update bank; each clause is selected independently with the feedback
// probability.
void train_example(ClauseBank& bank, const FeatureVector& x, int label, Rng& rng);

struct Example {
  FeatureVector features;
  int label = 0;
};

struct FitResult {
  std::vector<double> epoch_accuracy;  // training-set accuracy after each epoch
};

using EpochCallback = std::function<void(int epoch, double accuracy)>;

// config().epochs passes over a seeded shuffle of `data`. Deterministic for
// a fixed config().seed. Throws ContractViolation on an empty dataset.
FitResult fit(ClauseBank& bank, std::span<const Example> data, const EpochCallback& on_epoch = {});

double accuracy(const ClauseBank& bank, std::span<const Example> data);

struct ExportedClause {
  Polarity polarity = Polarity::Positive;
  int weight = 1;
  std::vector<Literal> literals;  // plain literals first, each half by feature
  friend bool operator==(const ExportedClause&, const ExportedClause&) = default;
};

std::vector<ExportedClause> export_clauses(const ClauseBank& bank);

// Rebuilds an inference-equivalent bank: included literals at N+1, the rest at N.
ClauseBank import_clauses(std::span<const ExportedClause> clauses, const TMConfig& config, int num_features);

}  // namespace hextm
