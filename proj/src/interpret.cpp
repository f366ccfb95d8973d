#include "hextm/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hextm/errors.hpp"

namespace hextm {

double ClauseStats::precision() const {
  const auto fired = true_positives + false_positives;
  return fired == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(fired);
}

double ClauseStats::coverage() const {
  const auto targets = true_positives + false_negatives;
  return targets == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(targets);
}

std::vector<ClauseStats> clause_stats(const ClauseBank& bank, std::span<const DatasetRecord> records) {
  if (records.empty()) throw ContractViolation("clause_stats: empty dataset");
  std::vector<ClauseStats> stats(static_cast<std::size_t>(bank.num_clauses()));
  for (int j = 0; j < bank.num_clauses(); ++j) {
    stats[static_cast<std::size_t>(j)].clause = j;
    stats[static_cast<std::size_t>(j)].polarity = bank.polarity(j);
  }
  for (const auto& rec : records) {
    for (auto& s : stats) {
      const int target = s.polarity == Polarity::Positive ? 1 : 0;
      const bool fires = bank.eval_clause(s.clause, rec.features);
      if (fires) {
        (rec.label == target ? s.true_positives : s.false_positives) += 1;
      } else if (rec.label == target) {
        s.false_negatives += 1;
      }
    }
  }
  return stats;
}

double score_clause(const ClauseStats& stats, double alpha) {
  if (!(alpha >= 0.0)) throw ContractViolation("alpha must be non-negative");
  return std::pow(stats.precision(), alpha) * stats.coverage();
}

ClausePattern ClausePattern::from_literals(std::span<const Literal> literals, int board_size) {
  ClausePattern p;
  p.board_size = board_size;
  const int cells = board_size * board_size;
  p.cells.assign(static_cast<std::size_t>(cells), CellMarks{});
  for (const auto& lit : literals) {
    if (lit.feature < 0 || lit.feature >= 2 * cells) throw ContractViolation("literal outside the board");
    const bool white = lit.feature >= cells;
    auto& m = p.cells[static_cast<std::size_t>(white ? lit.feature - cells : lit.feature)];
    if (white) {
      (lit.negated ? m.forbid_white : m.white) = true;
    } else {
      (lit.negated ? m.forbid_black : m.black) = true;
    }
  }
  return p;
}

std::vector<Literal> ClausePattern::literals() const {
  const int cells = board_size * board_size;
  std::vector<Literal> out;
  for (bool negated : {false, true}) {
    for (int i = 0; i < cells; ++i) {
      const auto& m = this->cells[static_cast<std::size_t>(i)];
      if (negated ? m.forbid_black : m.black) out.push_back({i, negated});
    }
    for (int i = 0; i < cells; ++i) {
      const auto& m = this->cells[static_cast<std::size_t>(i)];
      if (negated ? m.forbid_white : m.white) out.push_back({cells + i, negated});
    }
  }
  return out;
}

std::string render_pattern(const ClausePattern& pattern) {
  std::string out;
  for (int r = 0; r < pattern.board_size; ++r) {
    for (int c = 0; c < pattern.board_size; ++c) {
      const auto& m = pattern.cells[static_cast<std::size_t>(r * pattern.board_size + c)];
      std::string token;
      if (m.black) token += "B";
      if (m.white) token += "W";
      if (m.forbid_black) token += "!b";
      if (m.forbid_white) token += "!w";
      if (token.empty()) token = ".";
      if (c > 0) out += ' ';
      out += token;
    }
    out += '\n';
  }
  return out;
}

ClausePattern parse_pattern(std::string_view text, int board_size) {
  ClausePattern p;
  p.board_size = board_size;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (rows == board_size) throw ParseError("too many pattern rows", line_no);
    std::istringstream tokens(line);
    std::string tok;
    int cols = 0;
    while (tokens >> tok) {
      CellMarks m;
      if (tok != ".") {
        std::string_view rest = tok;
        auto eat = [&](std::string_view mark, bool& flag) {
          if (rest.substr(0, mark.size()) == mark) {
            flag = true;
            rest.remove_prefix(mark.size());
          }
        };
        eat("B", m.black);
        eat("W", m.white);
        eat("!b", m.forbid_black);
        eat("!w", m.forbid_white);
        if (!rest.empty()) throw ParseError("bad pattern token '" + tok + "'", line_no);
      }
      p.cells.push_back(m);
      ++cols;
    }
    if (cols != board_size) throw ParseError("expected " + std::to_string(board_size) + " pattern cells", line_no);
    ++rows;
  }
  if (rows != board_size) throw ParseError("expected " + std::to_string(board_size) + " pattern rows");
  return p;
}

TopClauses top_clauses(const ClauseBank& bank, std::span<const ClauseStats> stats, Polarity polarity, int k,
                       double alpha) {
  if (k < 1) throw ContractViolation("k must be at least 1");
  if (!(alpha >= 0.0)) throw ContractViolation("alpha must be non-negative");
  if (stats.size() != static_cast<std::size_t>(bank.num_clauses())) {
    throw ContractViolation("stats do not match the clause bank");
  }
  const int board_size = static_cast<int>(std::lround(std::sqrt(bank.num_features() / 2.0)));

  std::vector<std::pair<double, int>> scored;
  for (const auto& s : stats) {
    if (s.polarity == polarity) scored.emplace_back(score_clause(s, alpha), s.clause);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  TopClauses out;
  out.truncated = static_cast<std::size_t>(k) > scored.size();
  const std::size_t take = std::min(scored.size(), static_cast<std::size_t>(k));
  const auto exported = export_clauses(bank);
  for (std::size_t i = 0; i < take; ++i) {
    const int j = scored[i].second;
    const auto& literals = exported[static_cast<std::size_t>(j)].literals;
    out.clauses.push_back({j, scored[i].first, stats[static_cast<std::size_t>(j)], bank.weight(j),
                           ClausePattern::from_literals(literals, board_size)});
  }
  return out;
}

TopClauses top_clauses(const ClauseBank& bank, std::span<const DatasetRecord> records, Polarity polarity, int k,
                       double alpha) {
  const auto stats = clause_stats(bank, records);
  return top_clauses(bank, stats, polarity, k, alpha);
}

Heatmap local_interpretation(const ClauseBank& bank, const Board& board, bool diagnostic_negated) {
  const FeatureVector x = encode(board);
  if (x.size() != bank.num_features()) throw ContractViolation("board does not match the model's feature count");
  const int cells = board.num_cells();
  Heatmap h;
  h.board_size = board.size();
  h.black_counts.assign(static_cast<std::size_t>(cells), 0);
  h.white_counts.assign(static_cast<std::size_t>(cells), 0);
  if (diagnostic_negated) {
    h.forbid_black_counts.assign(static_cast<std::size_t>(cells), 0);
    h.forbid_white_counts.assign(static_cast<std::size_t>(cells), 0);
  }
  for (int j = 0; j < bank.num_clauses(); ++j) {
    if (!bank.eval_clause(j, x)) continue;
    const LiteralMask& inc = bank.includes(j);
    for (int f = 0; f < 2 * cells; ++f) {
      const auto cell = static_cast<std::size_t>(f < cells ? f : f - cells);
      if (inc.test({f, false})) ++(f < cells ? h.black_counts : h.white_counts)[cell];
      if (diagnostic_negated && inc.test({f, true})) {
        ++(f < cells ? h.forbid_black_counts : h.forbid_white_counts)[cell];
      }
    }
  }
  h.prediction = predict(bank, x);
  return h;
}

Histogram precision_histogram(std::span<const ClauseStats> stats, Polarity polarity, int bins) {
  if (bins < 1) throw ContractViolation("bins must be at least 1");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& s : stats) {
    if (s.polarity != polarity) continue;
    const double p = s.precision();
    const int bin = std::min(static_cast<int>(std::floor(p * bins)), bins - 1);
    ++h.counts[static_cast<std::size_t>(std::max(bin, 0))];
  }
  return h;
}

}  // namespace hextm
