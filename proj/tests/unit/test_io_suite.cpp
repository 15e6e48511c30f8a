#include <cmath>
#include <sstream>

#include "doctest.h"

#include "bcg/errors.hpp"
#include "bcg/json_io.hpp"
#include "bcg/lower_bound.hpp"
#include "bcg/suite.hpp"

using namespace bcg;

TEST_CASE("lower-bound instances have the stated shape") {
  struct Shape {
    std::uint32_t n;
    int m;
    std::uint64_t resources, path;
  };
  for (const Shape s : {Shape{2, 1, 4, 2}, Shape{4, 1, 16, 4}, Shape{2, 2, 8, 4}, Shape{3, 2, 27, 9}}) {
    const LowerBoundInstance lb = generate_lower_bound(s.n, s.m);
    CHECK(lb.num_resources == s.resources);
    CHECK(lb.path_len == s.path);
    CHECK(lb.game.num_resources() == s.resources);
    CHECK(lb.game.num_players() == s.n);
    // Paths are disjoint and e sits on player 0's path only.
    std::vector<int> seen(s.resources, 0);
    for (std::size_t i = 0; i < s.n; ++i) {
      CHECK(lb.game.strategy(i, 0) == Strategy{0});
      CHECK(lb.game.strategy(i, 1).size() == s.path);
      for (ResourceId r : lb.game.strategy(i, 1)) ++seen[r];
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
    CHECK(lb.game.strategy(0, 1).front() == 0);
  }
  CHECK_THROWS_AS(generate_lower_bound(1, 1), ValidationError);
  CHECK_THROWS_AS(generate_lower_bound(2, 0), ValidationError);
  CHECK_THROWS_AS(generate_lower_bound(10, 5, 10'000), StateSpaceTooLarge);
}

TEST_CASE("lower-bound verification") {
  for (int m = 1; m <= 3; ++m) {
    for (std::uint32_t n = 2; n <= 5; ++n) {
      const LowerBoundInstance lb = generate_lower_bound(n, m);
      const LowerBoundReport r = verify_lower_bound(lb);
      CHECK(r.passed(n));
      CHECK(r.poa.poa == Rational(n, 1));
      CHECK(r.root == doctest::Approx(n));
      // Indifference of every player but 0; player 0 strictly prefers e.
      const CongestionVector c = congestion_of(lb.game, lb.state_s);
      for (std::size_t i = 0; i < n; ++i) {
        const Cost direct = player_cost(lb.game, lb.state_s, c, i);
        const Cost path = deviation_cost(lb.game, lb.state_s, c, i, 1);
        CHECK(direct == delay(n, m));
        if (i == 0) {
          CHECK(path == delay(n, m) + lb.path_len - 1);
        } else {
          CHECK(path == direct);
        }
      }
    }
  }
}

TEST_CASE("sweep rows and slope") {
  const auto rows = sweep_lower_bound(1, 2, 6);
  REQUIRE(rows.size() == 5);
  for (const SweepRow& r : rows) {
    CHECK(r.verified);
    CHECK(r.poa == Rational(r.n, 1));
    CHECK(r.num_resources == static_cast<std::uint64_t>(r.n) * r.n);
  }
  CHECK(loglog_slope(rows) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(loglog_slope(sweep_lower_bound(2, 2, 4)) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK_THROWS_AS(loglog_slope({rows.front()}), ValidationError);
}

TEST_CASE("game files round-trip") {
  const LowerBoundInstance lb = generate_lower_bound(3, 2);
  const std::string text = to_json(lb.game).dump();
  CHECK(parse_game(text) == lb.game);
  std::istringstream in(text);
  CHECK(parse_game(in) == lb.game);
}

TEST_CASE("game file errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_game(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  CHECK(message("{").find("malformed JSON") != std::string::npos);
  CHECK(message("[]").find("object") != std::string::npos);
  CHECK(message(R"({"num_resources": 2, "players": [[[0]]]})").find("degree") != std::string::npos);
  CHECK(message(R"({"degree": 1, "players": [[[0]]]})").find("num_resources") != std::string::npos);
  CHECK(message(R"({"degree": -1, "num_resources": 2, "players": [[[0]]]})").find("degree") != std::string::npos);
  CHECK(message(R"({"degree": 0, "num_resources": 2, "players": [[[0]]]})").find("degree") != std::string::npos);
  CHECK(message(R"({"degree": 1, "num_resources": 2, "players": []})").find("player") != std::string::npos);
  CHECK(message(R"({"degree": 1, "num_resources": 2, "players": [[[0], []]]})").find("player 0") != std::string::npos);
  CHECK(message(R"({"degree": 1, "num_resources": 2, "players": [[[0, 5]]]})").find("players[0][0]") !=
        std::string::npos);
  CHECK(message(R"({"degree": 1, "num_resources": 2, "players": [[["a"]]]})").find("players[0][0]") !=
        std::string::npos);
  CHECK(message(R"({"degree": 1, "num_resources": 2, "players": [[[0]]]})") == "accepted");
}

TEST_CASE("large costs serialize as strings") {
  CHECK(cost_to_json(42) == 42);
  CHECK(cost_to_json(Cost{1} << 70) == to_string(Cost{1} << 70));
}

TEST_CASE("random generator respects its limits") {
  RunConfig config;
  config.max_players = 5;
  config.max_resources = 7;
  config.max_strategies = 4;
  config.min_degree = 2;
  config.max_degree = 3;
  for (std::uint64_t i = 0; i < 300; ++i) {
    std::mt19937_64 rng = game_rng(9, i);
    const Game g = random_game(rng, config);
    CHECK(g.num_players() >= 2);
    CHECK(g.num_players() <= 5);
    CHECK(g.num_resources() >= 2);
    CHECK(g.num_resources() <= 7);
    CHECK(g.degree() >= 2);
    CHECK(g.degree() <= 3);
    for (const StrategySet& set : g.players()) {
      CHECK(set.size() >= 2);
      CHECK(set.size() <= 4);
      for (const Strategy& s : set) CHECK(s.size() <= 3);
    }
  }
  config.max_players = 1;
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(random_game(rng, config), ValidationError);
}

TEST_CASE("forced games have congestion above psi") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::mt19937_64 rng = game_rng(4, i);
    const ForcedGame fg = forced_congestion_game(rng);
    const std::uint32_t psi = std::max<std::uint32_t>(2 * fg.game.degree(), 3 * fg.poa.c_star);
    CHECK(fg.poa.c > psi);
  }
}

TEST_CASE("suite runs are reproducible") {
  RunConfig config;
  config.count = 25;
  config.forced_count = 5;
  config.seed = 1;
  const SuiteReport a = run_suite(config);
  const SuiteReport b = run_suite(config);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(a.passed());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].index == i);

  config.count = 0;
  config.forced_count = 0;
  const SuiteReport empty = run_suite(config);
  CHECK(empty.records.empty());
  CHECK(empty.passed());
}
