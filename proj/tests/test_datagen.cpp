#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hextm/datagen.hpp"
#include "hextm/errors.hpp"
#include "oracles.hpp"

using namespace hextm;

TEST_CASE("self-play games are legal alternating sequences ending in a win") {
  Rng rng(12);
  for (int g = 0; g < 5; ++g) {
    const GameRecord game = play_game(10, rng);
    REQUIRE(game.snapshots.size() >= 12);
    CHECK(game.snapshots.front() == Board());
    for (std::size_t i = 1; i < game.snapshots.size(); ++i) {
      const Board& prev = game.snapshots[i - 1];
      const Board& next = game.snapshots[i];
      REQUIRE(next.move_count() == prev.move_count() + 1);
      REQUIRE(oracle::dfs_winner(prev) == Winner::None);
      int changed = 0;
      for (int c = 0; c < 36; ++c) {
        if (prev.at_index(c) != next.at_index(c)) {
          ++changed;
          REQUIRE(prev.at_index(c) == Cell::Empty);
          REQUIRE(next.at_index(c) == piece_of(prev.to_move()));
        }
      }
      REQUIRE(changed == 1);
    }
    const Winner w = oracle::dfs_winner(game.snapshots.back());
    REQUIRE(w != Winner::None);
    CHECK((w == Winner::Black) == (game.winner == Player::Black));
  }
}

TEST_CASE("Monte Carlo move selection takes an immediate win") {
  // Black holds b1..b5, so a6 and b6 both finish the chain; a6 has the lower index.
  Board b;
  for (int r = 0; r < 5; ++r) {
    b = place_unchecked(b, r * 6 + 1, Cell::Black);
    b = place_unchecked(b, r * 6 + 4, Cell::White);
  }
  REQUIRE(b.to_move() == Player::Black);
  REQUIRE(winner(b) == Winner::None);
  Rng rng(1);
  CHECK(monte_carlo_move(b, 200, rng) == parse_coord("a6"));

  // White to move: blocking both cells is impossible, but White can still
  // only win by connecting; it must at least choose a legal empty cell.
  const Board w = apply_move(b, parse_coord("f6"));
  const Coord c = monte_carlo_move(w, 20, rng);
  CHECK(w.at(c) == Cell::Empty);

  Board done = apply_move(b, parse_coord("a6"));
  CHECK_THROWS_AS(monte_carlo_move(done, 10, rng), TerminalState);
}

TEST_CASE("snapshots cover the configured move range and carry the final winner") {
  GenConfig cfg;
  cfg.n_games = 6;
  cfg.playouts_per_move = 5;
  cfg.min_moves = 3;
  cfg.max_moves = 15;
  cfg.seed = 4;
  const auto games = play_games(cfg);
  const auto records = snapshot_games(games, cfg);
  std::size_t expected = 0;
  for (const auto& g : games) {
    for (const auto& s : g.snapshots) expected += s.move_count() >= 3 && s.move_count() <= 15;
  }
  CHECK(records.size() == expected);
  std::size_t at = 0;
  for (const auto& g : games) {
    for (const auto& s : g.snapshots) {
      if (s.move_count() < 3 || s.move_count() > 15) continue;
      const auto& r = records[at++];
      CHECK(r.features == encode(s));
      CHECK(r.move_count == s.move_count());
      CHECK(r.label == (g.winner == Player::Black ? 1 : 0));
    }
  }
}

TEST_CASE("generation is a pure function of the config") {
  GenConfig cfg;
  cfg.n_games = 4;
  cfg.playouts_per_move = 4;
  cfg.seed = 99;
  const auto a = generate_dataset(cfg);
  const auto b = generate_dataset(cfg);
  REQUIRE(a.size() == b.size());
  std::ostringstream sa, sb;
  write_dataset(a, sa);
  write_dataset(b, sb);
  CHECK(sa.str() == sb.str());
  // Game i depends only on seed + i.
  GenConfig shifted = cfg;
  shifted.seed = 100;
  shifted.n_games = 3;
  const auto g1 = play_games(cfg);
  const auto g2 = play_games(shifted);
  for (int i = 0; i < 3; ++i) CHECK(g1[static_cast<std::size_t>(i + 1)].snapshots == g2[static_cast<std::size_t>(i)].snapshots);
}

TEST_CASE("config validation rejects bad ranges") {
  GenConfig cfg;
  cfg.min_moves = 10;
  cfg.max_moves = 5;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.min_moves = 1;
  cfg.max_moves = 5;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.min_moves = 2;
  cfg.max_moves = 37;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.max_moves = 36;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_games = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}

TEST_CASE("dataset files round-trip and report malformed lines") {
  GenConfig cfg;
  cfg.n_games = 3;
  cfg.playouts_per_move = 3;
  const auto records = generate_dataset(cfg);
  std::ostringstream out;
  write_dataset(records, out);
  std::istringstream in(out.str());
  const auto back = read_dataset(in);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].features == records[i].features);
    CHECK(back[i].label == records[i].label);
    CHECK(back[i].move_count == records[i].move_count);
  }

  auto line_of = [](const std::string& body) -> std::size_t {
    std::istringstream s(body);
    try {
      read_dataset(s);
      return 0;
    } catch (const ParseError& e) {
      return e.line();
    }
  };
  const std::string header = std::string(kDatasetHeader) + "\n";
  const std::string ok = std::string(72, '0') + " 1 0\n";
  CHECK(line_of(header + ok) == 0);
  CHECK(line_of("bogus\n") == 1);
  CHECK(line_of(header + ok + std::string(71, '0') + " 1 0\n") == 3);
  CHECK(line_of(header + std::string(72, '0') + " 2 0\n") == 2);
  CHECK(line_of(header + std::string(72, '0') + " 1 3\n") == 2);
  std::string both(72, '0');
  both[0] = '1';
  both[36] = '1';
  CHECK(line_of(header + both + " 1 2\n") == 2);
  CHECK(line_of(header + std::string(72, '0') + " 1\n") == 2);
}

TEST_CASE("reading from a path adds the file name to errors") {
  oracle::TempDir dir("data");
  {
    std::ofstream f(dir / "bad.txt");
    f << kDatasetHeader << "\nnope\n";
  }
  try {
    read_dataset(dir / "bad.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
  }
}
