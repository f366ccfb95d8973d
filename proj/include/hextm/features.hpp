#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "hextm/board.hpp"

namespace hextm {

inline constexpr int kMaxFeatures = 128;

// Fixed-capacity propositional input x in {0,1}^o, o <= 128, packed into
// two 64-bit words. Feature indices are 0-based: x_k in the usual 1-based
// notation lives at index k-1.
class FeatureVector {
 public:
  using Words = std::array<std::uint64_t, 2>;

  explicit FeatureVector(int num_features = 2 * kDefaultBoardSize * kDefaultBoardSize);

  int size() const { return size_; }
  bool get(int index) const { return (words_[index >> 6] >> (index & 63)) & 1U; }
  void set(int index, bool value = true);
  int popcount() const { return std::popcount(words_[0]) + std::popcount(words_[1]); }
  const Words& words() const { return words_; }

  // 0/1 characters, feature 0 first.
  std::string to_bits() const;
  static FeatureVector from_bits(std::string_view bits);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  int size_;
  Words words_{};
};

enum class Piece : std::uint8_t { Black, White };

// Feature slot for "piece of this colour at c": Black cells occupy
// 0..n*n-1, White cells n*n..2*n*n-1, both row-major from the top left.
int feature_index(Coord c, Piece piece, int board_size = kDefaultBoardSize);

FeatureVector encode(const Board& board);

// Throws InvalidEncoding when a cell has both colour bits set or the
// piece counts are illegal.
Board decode(const FeatureVector& features, int board_size = kDefaultBoardSize);

}  // namespace hextm
