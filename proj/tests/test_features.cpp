#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hextm/errors.hpp"
#include "hextm/features.hpp"
#include "oracles.hpp"

using namespace hextm;

TEST_CASE("Black pieces use the first block of features, White the second") {
  CHECK(feature_index(parse_coord("d2"), Piece::Black) == 9);  // x10 in 1-based naming
  CHECK(feature_index(parse_coord("f1"), Piece::Black) == 5);  // x6
  CHECK(feature_index(parse_coord("a1"), Piece::White) == 36);
  CHECK(feature_index(parse_coord("f6"), Piece::White) == 71);
}

TEST_CASE("encoding sets exactly one feature per piece") {
  Board b = apply_move(Board(), parse_coord("d2"));
  b = apply_move(b, parse_coord("f1"));
  const FeatureVector x = encode(b);
  CHECK(x.size() == 72);
  CHECK(x.popcount() == 2);
  CHECK(x.get(9));
  CHECK(x.get(36 + 5));
  CHECK_FALSE(x.get(5));
}

TEST_CASE("encode and decode are inverse on legal boards") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const Board b = oracle::random_legal(rng, 6, static_cast<int>(rng() % 37));
    const FeatureVector x = encode(b);
    CHECK(x.popcount() == b.move_count());
    CHECK(decode(x) == b);
  }
}

TEST_CASE("decode rejects inconsistent vectors") {
  FeatureVector both;
  both.set(0);
  both.set(36);
  CHECK_THROWS_AS(decode(both), InvalidEncoding);
  FeatureVector two_black;
  two_black.set(0);
  two_black.set(1);
  CHECK_THROWS_AS(decode(two_black), InvalidEncoding);
  CHECK_THROWS_AS(decode(FeatureVector(50)), InvalidEncoding);
}

TEST_CASE("bit strings round-trip") {
  std::mt19937_64 rng(2);
  const FeatureVector x = oracle::random_features(rng, 72);
  const std::string bits = x.to_bits();
  CHECK(bits.size() == 72);
  CHECK(FeatureVector::from_bits(bits) == x);
  CHECK_THROWS(FeatureVector::from_bits("012"));
}
