#include "hextm/board.hpp"

#include <algorithm>
#include <numeric>

#include "hextm/errors.hpp"

namespace hextm {

namespace {

constexpr int kNeighborOffsets[6][2] = {{-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}};

void check_size(int size) {
  if (size < 1 || size > kMaxBoardSize) {
    throw ContractViolation("board size must be in 1.." + std::to_string(kMaxBoardSize));
  }
}

// Union-find over the cells plus four virtual edge nodes.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }
  bool same(int a, int b) { return find(a) == find(b); }

 private:
  std::vector<int> parent_;
};

char cell_char(Cell c) {
  switch (c) {
    case Cell::Black: return 'B';
    case Cell::White: return 'W';
    default: return '.';
  }
}

Cell char_cell(char ch, std::size_t line) {
  switch (ch) {
    case '.': return Cell::Empty;
    case 'B': return Cell::Black;
    case 'W': return Cell::White;
    default: throw ParseError(std::string("unexpected board character '") + ch + "'", line);
  }
}

}  // namespace

const char* to_string(Winner w) {
  switch (w) {
    case Winner::Black: return "black";
    case Winner::White: return "white";
    default: return "none";
  }
}

const char* to_string(Player p) { return p == Player::Black ? "black" : "white"; }

Coord parse_coord(std::string_view name, int board_size) {
  if (name.size() < 2 || name[0] < 'a' || name[0] > 'z') {
    throw ContractViolation("bad cell name '" + std::string(name) + "'");
  }
  int row = 0;
  for (char ch : name.substr(1)) {
    if (ch < '0' || ch > '9') throw ContractViolation("bad cell name '" + std::string(name) + "'");
    row = row * 10 + (ch - '0');
  }
  Coord c{row, name[0] - 'a' + 1};
  if (!in_bounds(c, board_size)) throw ContractViolation("cell '" + std::string(name) + "' is off the board");
  return c;
}

std::string coord_name(Coord c) {
  return std::string(1, static_cast<char>('a' + c.col - 1)) + std::to_string(c.row);
}

Board::Board(int size) : size_(size) { check_size(size); }

Board Board::from_cells(int size, std::span<const Cell> cells) {
  Board b(size);
  if (cells.size() != static_cast<std::size_t>(b.num_cells())) {
    throw ContractViolation("expected " + std::to_string(b.num_cells()) + " cells");
  }
  std::copy(cells.begin(), cells.end(), b.cells_.begin());
  b.black_ = static_cast<int>(std::count(cells.begin(), cells.end(), Cell::Black));
  b.white_ = static_cast<int>(std::count(cells.begin(), cells.end(), Cell::White));
  if (b.black_ != b.white_ && b.black_ != b.white_ + 1) {
    throw InvalidEncoding("illegal piece counts: " + std::to_string(b.black_) + " black, " +
                          std::to_string(b.white_) + " white");
  }
  return b;
}

Cell Board::at(Coord c) const {
  if (!in_bounds(c, size_)) throw ContractViolation("cell " + coord_name(c) + " is off the board");
  return cells_[static_cast<std::size_t>(index(c))];
}

int Board::count(Cell c) const {
  switch (c) {
    case Cell::Black: return black_;
    case Cell::White: return white_;
    default: return num_cells() - black_ - white_;
  }
}

bool operator==(const Board& a, const Board& b) {
  return a.size_ == b.size_ && std::equal(a.cells().begin(), a.cells().end(), b.cells().begin());
}

bool in_bounds(Coord c, int board_size) {
  return c.row >= 1 && c.row <= board_size && c.col >= 1 && c.col <= board_size;
}

std::vector<Coord> neighbors(Coord c, int board_size) {
  check_size(board_size);
  if (!in_bounds(c, board_size)) {
    throw ContractViolation("neighbors: (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                            ") outside " + std::to_string(board_size) + "x" + std::to_string(board_size));
  }
  std::vector<Coord> out;
  out.reserve(6);
  for (const auto& d : kNeighborOffsets) {
    Coord n{c.row + d[0], c.col + d[1]};
    if (in_bounds(n, board_size)) out.push_back(n);
  }
  return out;
}

Winner winner(const Board& board) {
  const int n = board.size();
  const int cells = board.num_cells();
  const int top = cells, bottom = cells + 1, left = cells + 2, right = cells + 3;
  DisjointSets sets(cells + 4);

  for (int i = 0; i < cells; ++i) {
    const Cell piece = board.at_index(i);
    if (piece == Cell::Empty) continue;
    const int r = i / n, c = i % n;
    if (piece == Cell::Black) {
      if (r == 0) sets.unite(i, top);
      if (r == n - 1) sets.unite(i, bottom);
    } else {
      if (c == 0) sets.unite(i, left);
      if (c == n - 1) sets.unite(i, right);
    }
    // Forward neighbours only; the backward ones were linked when visited.
    if (c + 1 < n && board.at_index(i + 1) == piece) sets.unite(i, i + 1);
    if (r + 1 < n) {
      if (c > 0 && board.at_index(i + n - 1) == piece) sets.unite(i, i + n - 1);
      if (board.at_index(i + n) == piece) sets.unite(i, i + n);
    }
  }
  if (sets.same(top, bottom)) return Winner::Black;
  if (sets.same(left, right)) return Winner::White;
  return Winner::None;
}

std::vector<Coord> legal_moves(const Board& board) {
  if (winner(board) != Winner::None) throw TerminalState("game is already decided");
  std::vector<Coord> moves;
  for (int i = 0; i < board.num_cells(); ++i) {
    if (board.at_index(i) == Cell::Empty) moves.push_back(board.coord(i));
  }
  return moves;
}

Board apply_move(const Board& board, Coord c) {
  if (!in_bounds(c, board.size())) throw RejectedMove("cell " + coord_name(c) + " is off the board");
  if (board.at(c) != Cell::Empty) throw RejectedMove("cell " + coord_name(c) + " is occupied");
  if (winner(board) != Winner::None) throw RejectedMove("game is already decided");
  return place_unchecked(board, board.index(c), piece_of(board.to_move()));
}

Board place_unchecked(const Board& board, int index, Cell piece) {
  Board next = board;
  auto& slot = next.cells_[static_cast<std::size_t>(index)];
  if (slot == Cell::Black) --next.black_;
  if (slot == Cell::White) --next.white_;
  slot = piece;
  if (piece == Cell::Black) ++next.black_;
  if (piece == Cell::White) ++next.white_;
  return next;
}

bool connects_top_bottom(std::uint64_t stones, int board_size) {
  check_size(board_size);
  const int n = board_size;
  const int cells = n * n;
  const std::uint64_t all = cells == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1;
  std::uint64_t first_col = 0;
  for (int r = 0; r < n; ++r) first_col |= std::uint64_t{1} << (r * n);
  const std::uint64_t last_col = first_col << (n - 1);
  const std::uint64_t top = (std::uint64_t{1} << n) - 1;
  const std::uint64_t bottom = top << (cells - n);
  stones &= all;

  std::uint64_t reach = stones & top;
  for (;;) {
    // Offsets -n, -n+1, -1, +1, +n-1, +n; moves with a column step skip the edge column they would wrap from.
    const std::uint64_t not_last = reach & ~last_col;
    const std::uint64_t not_first = reach & ~first_col;
    const std::uint64_t grown = reach | (reach >> n) | (not_last >> (n - 1)) | (not_first >> 1) | (not_last << 1) |
                                (not_first << (n - 1)) | (reach << n);
    const std::uint64_t next = grown & stones;
    if (next & bottom) return true;
    if (next == reach) return false;
    reach = next;
  }
}

std::string to_text(const Board& board) {
  std::string out;
  out.reserve(static_cast<std::size_t>(board.num_cells() + board.size()));
  for (int i = 0; i < board.num_cells(); ++i) {
    out += cell_char(board.at_index(i));
    if ((i + 1) % board.size() == 0) out += '\n';
  }
  return out;
}

Board parse_board_text(std::string_view text, int board_size) {
  check_size(board_size);
  std::vector<Cell> cells;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (rows == static_cast<std::size_t>(board_size)) throw ParseError("too many board rows", line_no);
    if (line.size() != static_cast<std::size_t>(board_size)) {
      throw ParseError("expected " + std::to_string(board_size) + " cells, got " + std::to_string(line.size()),
                       line_no);
    }
    for (char ch : line) cells.push_back(char_cell(ch, line_no));
    ++rows;
  }
  if (rows != static_cast<std::size_t>(board_size)) {
    throw ParseError("expected " + std::to_string(board_size) + " board rows, got " + std::to_string(rows));
  }
  return Board::from_cells(board_size, cells);
}

std::string to_flat(const Board& board) {
  std::string out;
  for (Cell c : board.cells()) out += cell_char(c);
  return out;
}

Board parse_flat(std::string_view flat, int board_size) {
  check_size(board_size);
  if (flat.size() != static_cast<std::size_t>(board_size * board_size)) {
    throw ParseError("board string must have " + std::to_string(board_size * board_size) + " characters, got " +
                     std::to_string(flat.size()));
  }
  std::vector<Cell> cells;
  cells.reserve(flat.size());
  for (char ch : flat) cells.push_back(char_cell(ch, 0));
  return Board::from_cells(board_size, cells);
}

}  // namespace hextm
