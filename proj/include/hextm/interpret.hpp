#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hextm/board.hpp"
#include "hextm/datagen.hpp"
#include "hextm/tsetlin.hpp"

namespace hextm {

inline constexpr double kDefaultAlpha = 10.0;

// Counts against the clause's own target class: label 1 for positive
// polarity, label 0 for negative polarity.
struct ClauseStats {
  int clause = 0;
  Polarity polarity = Polarity::Positive;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;

  double precision() const;  // 0 when the clause never fires
  double coverage() const;   // 0 when the target class is absent
  friend bool operator==(const ClauseStats&, const ClauseStats&) = default;
};

// Single pass over `records`. Throws ContractViolation on an empty dataset.
std::vector<ClauseStats> clause_stats(const ClauseBank& bank, std::span<const DatasetRecord> records);

// precision^alpha * coverage. Throws ContractViolation for alpha < 0.
double score_clause(const ClauseStats& stats, double alpha);

// Per-cell marks of a clause rendered on the board.
struct CellMarks {
  bool black = false;            // x_p included
  bool white = false;            // x_{n*n+p} included
  bool forbid_black = false;     // not x_p included
  bool forbid_white = false;     // not x_{n*n+p} included
  friend bool operator==(const CellMarks&, const CellMarks&) = default;
};

struct ClausePattern {
  int board_size = kDefaultBoardSize;
  std::vector<CellMarks> cells;  // row-major

  static ClausePattern from_literals(std::span<const Literal> literals, int board_size = kDefaultBoardSize);
  std::vector<Literal> literals() const;  // same order as export_clauses
};

// Board text with one token per cell, tokens separated by spaces: "." for
// no mark, otherwise the concatenation of "B", "W", "!b", "!w" in that order.
std::string render_pattern(const ClausePattern& pattern);
ClausePattern parse_pattern(std::string_view text, int board_size = kDefaultBoardSize);

struct RankedClause {
  int clause = 0;
  double score = 0.0;
  ClauseStats stats;
  int weight = 1;
  ClausePattern pattern;
};

struct TopClauses {
  std::vector<RankedClause> clauses;  // score non-increasing, ties by clause index
  bool truncated = false;             // fewer clauses of the polarity than requested
};

// Ranks precomputed stats; the stats vector must come from clause_stats on `bank`.
TopClauses top_clauses(const ClauseBank& bank, std::span<const ClauseStats> stats, Polarity polarity, int k,
                       double alpha);
TopClauses top_clauses(const ClauseBank& bank, std::span<const DatasetRecord> records, Polarity polarity, int k,
                       double alpha);

struct Heatmap {
  int board_size = kDefaultBoardSize;
  std::vector<int> black_counts;  // row-major
  std::vector<int> white_counts;
  // Negated-literal tallies. Only filled in diagnostic mode; the standard
  // aggregation counts plain literals alone.
  std::vector<int> forbid_black_counts;
  std::vector<int> forbid_white_counts;
  Prediction prediction;
};

// Each clause that fires on the board adds 1 per included plain literal to
// the matching cell. Clause weights do not enter the counts.
Heatmap local_interpretation(const ClauseBank& bank, const Board& board, bool diagnostic_negated = false);

struct Histogram {
  std::vector<std::int64_t> counts;  // bins over [0,1]; last bin closed
};

Histogram precision_histogram(std::span<const ClauseStats> stats, Polarity polarity, int bins);

}  // namespace hextm
