#include "hextm/tsetlin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hextm/errors.hpp"

namespace hextm {

namespace {

// Uniform double in (0, 1].
double uniform_open(Rng& rng) { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }

LiteralMask feature_mask(int num_features) {
  LiteralMask m;
  for (int w = 0; w < 2; ++w) {
    const int bits = std::clamp(num_features - 64 * w, 0, 64);
    const std::uint64_t word = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    m.words[static_cast<std::size_t>(w)] = word;
    m.words[static_cast<std::size_t>(w) + 2] = word;
  }
  return m;
}

// Each valid literal independently set with probability p. Geometric
// skipping keeps the cost proportional to the number of set bits, which
// matters because p = 1/s is small for the usual s.
LiteralMask sample_literals(int num_features, double p, Rng& rng) {
  if (p >= 1.0) return feature_mask(num_features);
  LiteralMask m;
  if (p <= 0.0) return m;
  const int total = 2 * num_features;
  const double log_q = std::log1p(-p);
  long pos = -1;
  for (;;) {
    const double gap = std::floor(std::log(uniform_open(rng)) / log_q);
    if (gap >= total) break;
    pos += 1 + static_cast<long>(gap);
    if (pos >= total) break;
    const int col = static_cast<int>(pos);
    m.set(col < num_features ? Literal{col, false} : Literal{col - num_features, true});
  }
  return m;
}

LiteralMask and_not(const LiteralMask& a, const LiteralMask& b) {
  LiteralMask r;
  for (std::size_t w = 0; w < 4; ++w) r.words[w] = a.words[w] & ~b.words[w];
  return r;
}

}  // namespace

void TMConfig::validate() const {
  if (n_clauses <= 0 || n_clauses % 2 != 0) throw ContractViolation("n_clauses must be a positive even number");
  if (threshold <= 0) throw ContractViolation("threshold T must be positive");
  if (!(specificity > 1.0)) throw ContractViolation("specificity s must be greater than 1");
  if (states_per_action < 1 || states_per_action > 127) {
    throw ContractViolation("states_per_action N must be in 1..127");
  }
  if (max_weight < 1 || max_weight > 255) throw ContractViolation("max_weight must be in 1..255");
  if (epochs <= 0) throw ContractViolation("epochs must be positive");
}

const char* to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

Action action_of(int state, int states_per_action) {
  if (state < 1 || state > 2 * states_per_action) {
    throw ContractViolation("automaton state " + std::to_string(state) + " outside 1.." +
                            std::to_string(2 * states_per_action));
  }
  return state > states_per_action ? Action::Include : Action::Exclude;
}

int LiteralMask::count() const {
  return std::popcount(words[0]) + std::popcount(words[1]) + std::popcount(words[2]) + std::popcount(words[3]);
}

LiteralMask literal_values(const FeatureVector& x) {
  LiteralMask m = feature_mask(x.size());
  const auto& xw = x.words();
  m.words[0] &= xw[0];
  m.words[1] &= xw[1];
  m.words[2] &= ~xw[0];
  m.words[3] &= ~xw[1];
  return m;
}

ClauseBank::ClauseBank(const TMConfig& config, int num_features) : config_(config), num_features_(num_features) {
  config_.validate();
  if (num_features < 1 || num_features > kMaxFeatures) {
    throw ContractViolation("feature count must be in 1.." + std::to_string(kMaxFeatures));
  }
  const auto n = static_cast<std::size_t>(config_.n_clauses);
  states_.assign(n * static_cast<std::size_t>(num_literals()), static_cast<std::uint8_t>(config_.states_per_action));
  include_.assign(n, LiteralMask{});
  weights_.assign(n, 1);
}

ClauseBank ClauseBank::initialized(const TMConfig& config, int num_features) {
  ClauseBank bank(config, num_features);
  Rng rng(config.seed);
  const int n_states = config.states_per_action;
  for (int j = 0; j < bank.num_clauses(); ++j) {
    for (int k = 0; k < bank.num_literals(); ++k) {
      bank.set_state(j, k, n_states + static_cast<int>(rng() >> 63));
    }
  }
  return bank;
}

void ClauseBank::check_clause(int clause) const {
  if (clause < 0 || clause >= config_.n_clauses) {
    throw ContractViolation("clause index " + std::to_string(clause) + " out of range");
  }
}

int ClauseBank::state(int clause, int column) const {
  check_clause(clause);
  if (column < 0 || column >= num_literals()) throw ContractViolation("literal column out of range");
  return states_[static_cast<std::size_t>(clause) * static_cast<std::size_t>(num_literals()) +
                 static_cast<std::size_t>(column)];
}

void ClauseBank::set_state(int clause, int column, int value) {
  check_clause(clause);
  if (column < 0 || column >= num_literals()) throw ContractViolation("literal column out of range");
  const int n_states = config_.states_per_action;
  if (value < 1 || value > 2 * n_states) throw ContractViolation("state value out of range");
  states_[static_cast<std::size_t>(clause) * static_cast<std::size_t>(num_literals()) +
          static_cast<std::size_t>(column)] = static_cast<std::uint8_t>(value);
  const Literal lit = column < num_features_ ? Literal{column, false} : Literal{column - num_features_, true};
  auto& word = include_[static_cast<std::size_t>(clause)].words[(lit.negated ? 2 : 0) + (lit.feature >> 6)];
  const std::uint64_t bit = std::uint64_t{1} << (lit.feature & 63);
  word = value > n_states ? (word | bit) : (word & ~bit);
}

std::span<const std::uint8_t> ClauseBank::row(int clause) const {
  check_clause(clause);
  const auto width = static_cast<std::size_t>(num_literals());
  return {states_.data() + static_cast<std::size_t>(clause) * width, width};
}

void ClauseBank::set_weight(int clause, int weight) {
  check_clause(clause);
  if (weight < 1 || weight > 255) throw ContractViolation("clause weight must be in 1..255");
  weights_[static_cast<std::size_t>(clause)] = weight;
}

void ClauseBank::add_and_clip(int clause, const LiteralMask& increment, const LiteralMask& decrement) {
  const auto o = static_cast<std::size_t>(num_features_);
  const auto n_states = static_cast<std::uint8_t>(config_.states_per_action);
  const auto top = static_cast<std::uint8_t>(2 * config_.states_per_action);
  std::uint8_t* row = states_.data() + static_cast<std::size_t>(clause) * 2 * o;
  auto& inc_words = include_[static_cast<std::size_t>(clause)].words;

  for (std::size_t w = 0; w < 4; ++w) {
    const std::size_t base = (w >= 2 ? o : 0) + 64 * (w & 1);
    // Columns in both masks net to zero before clipping.
    std::uint64_t up = increment.words[w] & ~decrement.words[w];
    std::uint64_t down = decrement.words[w] & ~increment.words[w];
    while (up) {
      const int b = std::countr_zero(up);
      up &= up - 1;
      std::uint8_t& s = row[base + static_cast<std::size_t>(b)];
      if (s < top) {
        ++s;
        if (s == n_states + 1) inc_words[w] |= std::uint64_t{1} << b;
      }
    }
    while (down) {
      const int b = std::countr_zero(down);
      down &= down - 1;
      std::uint8_t& s = row[base + static_cast<std::size_t>(b)];
      if (s > 1) {
        if (s == n_states + 1) inc_words[w] &= ~(std::uint64_t{1} << b);
        --s;
      }
    }
  }
}

int vote_sum(const ClauseBank& bank, const FeatureVector& x) {
  int v = 0;
  const int n = bank.num_clauses();
  for (int j = 0; j < n; j += 2) {
    if (bank.eval_clause(j, x)) v += bank.weight(j);
    if (bank.eval_clause(j + 1, x)) v -= bank.weight(j + 1);
  }
  return v;
}

Prediction predict(const ClauseBank& bank, const FeatureVector& x) {
  Prediction p;
  p.vote_sum = vote_sum(bank, x);
  p.label = p.vote_sum >= 0 ? 1 : 0;
  p.margin = std::clamp(static_cast<double>(p.vote_sum) / bank.config().threshold, -1.0, 1.0);
  return p;
}

double feedback_probability(int vote_sum, int label, int threshold) {
  if (threshold <= 0) throw ContractViolation("threshold T must be positive");
  const int v = std::clamp(vote_sum, -threshold, threshold);
  const int error = label == 1 ? threshold - v : threshold + v;
  return static_cast<double>(error) / (2.0 * threshold);
}

FeedbackRows type_i_feedback(const ClauseBank& bank, int clause, const FeatureVector& x, Rng& rng) {
  const auto& cfg = bank.config();
  const LiteralMask lits = literal_values(x);
  // Bits set with probability 1/s: the "inaction" draws for true literals
  // of a firing clause, the erosion draws everywhere else.
  const LiteralMask rare = sample_literals(bank.num_features(), 1.0 / cfg.specificity, rng);
  FeedbackRows rows;
  if (bank.eval_clause(clause, x)) {
    // Literal 1: Include rewarded / Exclude penalised, both move the state up.
    rows.increment = cfg.boost_true_positives ? lits : and_not(lits, rare);
    // Literal 0 (always Exclude in a firing clause): rewarded, state down.
    rows.decrement = and_not(rare, lits);
  } else {
    rows.decrement = rare;
  }
  return rows;
}

FeedbackRows type_ii_feedback(const ClauseBank& bank, int clause, const FeatureVector& x) {
  FeedbackRows rows;
  if (!bank.eval_clause(clause, x)) return rows;
  const LiteralMask zeros = and_not(feature_mask(bank.num_features()), literal_values(x));
  rows.increment = and_not(zeros, bank.includes(clause));
  return rows;
}

void train_example(ClauseBank& bank, const FeatureVector& x, int label, Rng& rng) {
  const auto& cfg = bank.config();
  const double p = feedback_probability(vote_sum(bank, x), label, cfg.threshold);
  if (p <= 0.0) return;
  const Polarity target = label == 1 ? Polarity::Positive : Polarity::Negative;
  for (int j = 0; j < bank.num_clauses(); ++j) {
    if (uniform_open(rng) > p) continue;
    const bool fires = cfg.weighted && bank.eval_clause(j, x);
    if (bank.polarity(j) == target) {
      const FeedbackRows rows = type_i_feedback(bank, j, x, rng);
      bank.add_and_clip(j, rows.increment, rows.decrement);
      if (fires && bank.weight(j) < cfg.max_weight) bank.set_weight(j, bank.weight(j) + 1);
    } else {
      const FeedbackRows rows = type_ii_feedback(bank, j, x);
      bank.add_and_clip(j, rows.increment, rows.decrement);
      if (fires && bank.weight(j) > 1) bank.set_weight(j, bank.weight(j) - 1);
    }
  }
}

double accuracy(const ClauseBank& bank, std::span<const Example> data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data) correct += predict(bank, ex.features).label == ex.label;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

FitResult fit(ClauseBank& bank, std::span<const Example> data, const EpochCallback& on_epoch) {
  if (data.empty()) throw ContractViolation("fit: empty dataset");
  for (const auto& ex : data) {
    if (ex.features.size() != bank.num_features()) throw ContractViolation("fit: feature count mismatch");
    if (ex.label != 0 && ex.label != 1) throw ContractViolation("fit: labels must be 0 or 1");
  }
  // Separate stream from the one used to initialise the bank.
  Rng rng(bank.config().seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  FitResult result;
  for (int epoch = 1; epoch <= bank.config().epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) train_example(bank, data[i].features, data[i].label, rng);
    result.epoch_accuracy.push_back(accuracy(bank, data));
    if (on_epoch) on_epoch(epoch, result.epoch_accuracy.back());
  }
  return result;
}

std::vector<ExportedClause> export_clauses(const ClauseBank& bank) {
  std::vector<ExportedClause> out;
  out.reserve(static_cast<std::size_t>(bank.num_clauses()));
  for (int j = 0; j < bank.num_clauses(); ++j) {
    ExportedClause c;
    c.polarity = bank.polarity(j);
    c.weight = bank.weight(j);
    for (bool negated : {false, true}) {
      for (int f = 0; f < bank.num_features(); ++f) {
        if (bank.includes(j).test({f, negated})) c.literals.push_back({f, negated});
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

ClauseBank import_clauses(std::span<const ExportedClause> clauses, const TMConfig& config, int num_features) {
  if (clauses.size() != static_cast<std::size_t>(config.n_clauses)) {
    throw ContractViolation("import: expected " + std::to_string(config.n_clauses) + " clauses, got " +
                            std::to_string(clauses.size()));
  }
  ClauseBank bank(config, num_features);
  for (int j = 0; j < bank.num_clauses(); ++j) {
    const auto& c = clauses[static_cast<std::size_t>(j)];
    if (c.polarity != bank.polarity(j)) {
      throw ContractViolation("import: clause " + std::to_string(j) + " has the wrong polarity for its slot");
    }
    bank.set_weight(j, c.weight);
    for (const auto& lit : c.literals) {
      if (lit.feature < 0 || lit.feature >= num_features) throw ContractViolation("import: literal out of range");
      bank.set_state(j, lit.column(num_features), config.states_per_action + 1);
    }
  }
  return bank;
}

}  // namespace hextm
