#include "hextm/features.hpp"

#include <vector>

#include "hextm/errors.hpp"

namespace hextm {

FeatureVector::FeatureVector(int num_features) : size_(num_features) {
  if (num_features < 1 || num_features > kMaxFeatures) {
    throw ContractViolation("feature count must be in 1.." + std::to_string(kMaxFeatures));
  }
}

void FeatureVector::set(int index, bool value) {
  if (index < 0 || index >= size_) throw ContractViolation("feature index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (index & 63);
  if (value) {
    words_[index >> 6] |= bit;
  } else {
    words_[index >> 6] &= ~bit;
  }
}

std::string FeatureVector::to_bits() const {
  std::string out(static_cast<std::size_t>(size_), '0');
  for (int i = 0; i < size_; ++i) {
    if (get(i)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

FeatureVector FeatureVector::from_bits(std::string_view bits) {
  FeatureVector fv(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      fv.set(static_cast<int>(i));
    } else if (bits[i] != '0') {
      throw ParseError("feature bits must be 0 or 1");
    }
  }
  return fv;
}

int feature_index(Coord c, Piece piece, int board_size) {
  if (!in_bounds(c, board_size)) throw ContractViolation("cell " + coord_name(c) + " is off the board");
  const int cell = (c.row - 1) * board_size + (c.col - 1);
  return piece == Piece::Black ? cell : board_size * board_size + cell;
}

FeatureVector encode(const Board& board) {
  const int cells = board.num_cells();
  FeatureVector fv(2 * cells);
  for (int i = 0; i < cells; ++i) {
    switch (board.at_index(i)) {
      case Cell::Black: fv.set(i); break;
      case Cell::White: fv.set(cells + i); break;
      default: break;
    }
  }
  return fv;
}

Board decode(const FeatureVector& features, int board_size) {
  const int cells = board_size * board_size;
  if (features.size() != 2 * cells) {
    throw InvalidEncoding("expected " + std::to_string(2 * cells) + " features, got " +
                          std::to_string(features.size()));
  }
  std::vector<Cell> out(static_cast<std::size_t>(cells), Cell::Empty);
  for (int i = 0; i < cells; ++i) {
    const bool black = features.get(i);
    const bool white = features.get(cells + i);
    if (black && white) {
      throw InvalidEncoding("cell " + coord_name({i / board_size + 1, i % board_size + 1}) +
                            " has both colours set");
    }
    if (black) out[static_cast<std::size_t>(i)] = Cell::Black;
    if (white) out[static_cast<std::size_t>(i)] = Cell::White;
  }
  return Board::from_cells(board_size, out);
}

}  // namespace hextm
