#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hextm {

inline constexpr int kDefaultBoardSize = 6;
inline constexpr int kMaxBoardSize = 8;

enum class Cell : std::uint8_t { Empty, Black, White };
enum class Player : std::uint8_t { Black, White };
enum class Winner : std::uint8_t { None, Black, White };

inline Cell piece_of(Player p) { return p == Player::Black ? Cell::Black : Cell::White; }
inline Player opponent(Player p) { return p == Player::Black ? Player::White : Player::Black; }
const char* to_string(Winner w);
const char* to_string(Player p);

// 1-based (row, col). Row 1 is the top edge; columns are lettered a.. from the left.
struct Coord {
  int row = 1;
  int col = 1;
  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

// "d2" -> {row 2, col 4}.
Coord parse_coord(std::string_view name, int board_size = kDefaultBoardSize);
std::string coord_name(Coord c);

// Immutable-by-convention board value. Move count and side to move are
// derived from the piece counts, so the alternation invariant is checked
// once at construction and can't drift afterwards.
class Board {
 public:
  explicit Board(int size = kDefaultBoardSize);

  // Throws InvalidEncoding when the piece counts are not reachable by
  // alternating play with Black first.
  static Board from_cells(int size, std::span<const Cell> cells);

  int size() const { return size_; }
  int num_cells() const { return size_ * size_; }
  // 0-based row-major index.
  int index(Coord c) const { return (c.row - 1) * size_ + (c.col - 1); }
  Coord coord(int index) const { return {index / size_ + 1, index % size_ + 1}; }

  Cell at(Coord c) const;
  Cell at_index(int index) const { return cells_[static_cast<std::size_t>(index)]; }
  std::span<const Cell> cells() const { return {cells_.data(), static_cast<std::size_t>(num_cells())}; }

  int count(Cell c) const;
  int move_count() const { return black_ + white_; }
  Player to_move() const { return black_ == white_ ? Player::Black : Player::White; }
  bool full() const { return move_count() == num_cells(); }

  friend bool operator==(const Board& a, const Board& b);

 private:
  friend Board apply_move(const Board&, Coord);
  friend Board place_unchecked(const Board&, int, Cell);

  int size_;
  int black_ = 0;
  int white_ = 0;
  std::array<Cell, kMaxBoardSize * kMaxBoardSize> cells_{};
};

bool in_bounds(Coord c, int board_size);

// In-bounds subset of the six hex neighbours. Throws ContractViolation
// when `c` is off the board.
std::vector<Coord> neighbors(Coord c, int board_size = kDefaultBoardSize);

// Black connects row 1 to row n, White connects column 1 to column n.
Winner winner(const Board& board);

// All empty cells, row-major. Throws TerminalState once the game is decided.
std::vector<Coord> legal_moves(const Board& board);

// Bit i of `stones` is cell i in row-major order. True when the set cells
// join row 1 to row `board_size` (Black's goal). Flood fill on the mask.
bool connects_top_bottom(std::uint64_t stones, int board_size);

// Places the side-to-move's piece. Throws RejectedMove on an occupied cell
// or a decided board.
Board apply_move(const Board& board, Coord c);

// Places `piece` at `index` without turn or terminal checks; the caller
// keeps the counts legal. Used by playouts and test generators.
Board place_unchecked(const Board& board, int index, Cell piece);

// Text format: `size` lines of `size` characters from {., B, W}, row 1 first.
std::string to_text(const Board& board);
Board parse_board_text(std::string_view text, int board_size = kDefaultBoardSize);

// Flat row-major form used on the wire: size*size characters from {., B, W}.
std::string to_flat(const Board& board);
Board parse_flat(std::string_view flat, int board_size = kDefaultBoardSize);

}  // namespace hextm
