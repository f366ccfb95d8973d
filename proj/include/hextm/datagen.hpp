#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "hextm/board.hpp"
#include "hextm/features.hpp"
#include "hextm/tsetlin.hpp"

namespace hextm {

struct GameRecord {
  std::vector<Board> snapshots;  // empty board first, one per move, final position last
  Player winner = Player::Black;
  std::uint64_t seed = 0;
};

struct DatasetRecord {
  FeatureVector features;
  int label = 0;  // 1 = Black eventually won
  int move_count = 0;
  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct GenConfig {
  int n_games = 1000;
  int playouts_per_move = 50;
  int min_moves = 2;
  int max_moves = 22;
  std::uint64_t seed = 1;
  int board_size = kDefaultBoardSize;

  // Throws ContractViolation unless 2 <= min_moves <= max_moves <= cells.
  void validate() const;
};

// Flat Monte Carlo move for the side to move: every empty cell gets
// `playouts` random completions, the best win rate wins, ties go to the
// lowest cell index. Throws TerminalState on a finished game.
Coord monte_carlo_move(const Board& board, int playouts, Rng& rng);

// One self-play game. Every move is picked by flat Monte Carlo: each legal
// move gets `playouts_per_move` uniformly random completions and the move
// with the best win rate for the mover is played (lowest cell index on ties).
GameRecord play_game(int playouts_per_move, Rng& rng, int board_size = kDefaultBoardSize);

// Game i is played with its own generator seeded by config.seed + i.
std::vector<GameRecord> play_games(const GenConfig& config);

// One record per position whose move count lies in the snapshot range,
// labelled with the game's final winner.
std::vector<DatasetRecord> snapshot_games(std::span<const GameRecord> games, const GenConfig& config);

std::vector<DatasetRecord> generate_dataset(const GenConfig& config);

inline constexpr const char* kDatasetHeader = "hextm-dataset v1";

// `hextm-dataset v1` header, then `<bits> <label> <moveCount>` per line.
void write_dataset(std::span<const DatasetRecord> records, std::ostream& out);
void write_dataset(std::span<const DatasetRecord> records, const std::filesystem::path& path);

// Throws ParseError carrying the 1-based line number of the first bad line.
std::vector<DatasetRecord> read_dataset(std::istream& in);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

std::vector<Example> to_examples(std::span<const DatasetRecord> records);

}  // namespace hextm
