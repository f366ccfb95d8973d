#include "hextm/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include "hextm/errors.hpp"

namespace hextm {

namespace {

// Fills every empty cell in random order, alternating colours from
// `to_move`, and reports who owns the resulting full board. A random
// fill-in has the same outcome distribution as uniformly random play
// continued past the winning move.
Winner random_completion(const Board& board, std::uint64_t black, std::vector<int>& empties, Rng& rng) {
  std::shuffle(empties.begin(), empties.end(), rng);
  // Black takes every other filler cell, starting with the first when Black is to move.
  for (std::size_t k = board.to_move() == Player::Black ? 0 : 1; k < empties.size(); k += 2) {
    black |= std::uint64_t{1} << empties[k];
  }
  // On a full board exactly one side connects.
  return connects_top_bottom(black, board.size()) ? Winner::Black : Winner::White;
}

std::uint64_t black_mask(const Board& board) {
  std::uint64_t black = 0;
  for (int i = 0; i < board.num_cells(); ++i) {
    if (board.at_index(i) == Cell::Black) black |= std::uint64_t{1} << i;
  }
  return black;
}

}  // namespace

Coord monte_carlo_move(const Board& board, int playouts, Rng& rng) {
  if (playouts < 1) throw ContractViolation("playouts must be positive");
  const Winner mover = board.to_move() == Player::Black ? Winner::Black : Winner::White;
  std::vector<int> empties;
  for (int i = 0; i < board.num_cells(); ++i) {
    if (board.at_index(i) == Cell::Empty) empties.push_back(i);
  }
  if (empties.empty() || winner(board) != Winner::None) throw TerminalState("no move to choose: game is over");
  int best_index = -1;
  int best_wins = -1;
  std::vector<int> rest;
  for (int candidate : empties) {
    const Board next = place_unchecked(board, candidate, piece_of(board.to_move()));
    rest.clear();
    for (int i : empties) {
      if (i != candidate) rest.push_back(i);
    }
    const std::uint64_t black = black_mask(next);
    int wins = 0;
    for (int p = 0; p < playouts; ++p) wins += random_completion(next, black, rest, rng) == mover;
    if (wins > best_wins) {
      best_wins = wins;
      best_index = candidate;
    }
  }
  return board.coord(best_index);
}

void GenConfig::validate() const {
  if (n_games < 1) throw ContractViolation("n_games must be positive");
  if (playouts_per_move < 1) throw ContractViolation("playouts_per_move must be positive");
  const int cells = board_size * board_size;
  if (min_moves < 2 || min_moves > max_moves || max_moves > cells) {
    throw ContractViolation("snapshot range must satisfy 2 <= min <= max <= " + std::to_string(cells) + ", got [" +
                            std::to_string(min_moves) + ", " + std::to_string(max_moves) + "]");
  }
}

GameRecord play_game(int playouts_per_move, Rng& rng, int board_size) {
  if (playouts_per_move < 1) throw ContractViolation("playouts_per_move must be positive");
  GameRecord game;
  Board board(board_size);
  game.snapshots.push_back(board);
  Winner w = Winner::None;
  while (w == Winner::None) {
    board = apply_move(board, monte_carlo_move(board, playouts_per_move, rng));
    game.snapshots.push_back(board);
    w = winner(board);
  }
  game.winner = w == Winner::Black ? Player::Black : Player::White;
  return game;
}

std::vector<GameRecord> play_games(const GenConfig& config) {
  config.validate();
  std::vector<GameRecord> games;
  games.reserve(static_cast<std::size_t>(config.n_games));
  for (int i = 0; i < config.n_games; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    Rng rng(seed);
    games.push_back(play_game(config.playouts_per_move, rng, config.board_size));
    games.back().seed = seed;
  }
  return games;
}

std::vector<DatasetRecord> snapshot_games(std::span<const GameRecord> games, const GenConfig& config) {
  config.validate();
  if (games.empty()) throw ContractViolation("snapshot_games: no games");
  std::vector<DatasetRecord> records;
  for (const auto& game : games) {
    const int label = game.winner == Player::Black ? 1 : 0;
    for (const auto& board : game.snapshots) {
      const int moves = board.move_count();
      if (moves < config.min_moves || moves > config.max_moves) continue;
      records.push_back({encode(board), label, moves});
    }
  }
  return records;
}

std::vector<DatasetRecord> generate_dataset(const GenConfig& config) {
  const auto games = play_games(config);
  return snapshot_games(games, config);
}

void write_dataset(std::span<const DatasetRecord> records, std::ostream& out) {
  out << kDatasetHeader << '\n';
  for (const auto& r : records) out << r.features.to_bits() << ' ' << r.label << ' ' << r.move_count << '\n';
}

void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path.string());
  write_dataset(records, out);
  if (!out) throw std::runtime_error("failed writing dataset file: " + path.string());
}

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  constexpr std::size_t kBits = 2 * kDefaultBoardSize * kDefaultBoardSize;
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing dataset header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDatasetHeader) throw ParseError("expected header '" + std::string(kDatasetHeader) + "'", line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto sp1 = line.find(' ');
    const auto sp2 = sp1 == std::string::npos ? std::string::npos : line.find(' ', sp1 + 1);
    if (sp2 == std::string::npos) throw ParseError("expected '<bits> <label> <moveCount>'", line_no);
    const std::string_view bits(line.data(), sp1);
    if (bits.size() != kBits) {
      throw ParseError("expected " + std::to_string(kBits) + " feature bits, got " + std::to_string(bits.size()),
                       line_no);
    }
    DatasetRecord rec;
    try {
      rec.features = FeatureVector::from_bits(bits);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    const std::string_view label(line.data() + sp1 + 1, sp2 - sp1 - 1);
    if (label != "0" && label != "1") throw ParseError("label must be 0 or 1", line_no);
    rec.label = label[0] - '0';
    const char* first = line.data() + sp2 + 1;
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, rec.move_count);
    if (ec != std::errc{} || ptr != last || first == last) throw ParseError("bad move count", line_no);
    if (rec.move_count != rec.features.popcount()) {
      throw ParseError("move count " + std::to_string(rec.move_count) + " disagrees with " +
                           std::to_string(rec.features.popcount()) + " pieces",
                       line_no);
    }
    try {
      decode(rec.features);
    } catch (const InvalidEncoding& e) {
      throw ParseError(e.what(), line_no);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
  try {
    return read_dataset(in);
  } catch (const ParseError& e) {
    throw e.with_context(path.string());
  }
}

std::vector<Example> to_examples(std::span<const DatasetRecord> records) {
  std::vector<Example> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.features, r.label});
  return out;
}

}  // namespace hextm
