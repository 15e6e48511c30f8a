#include <limits>
#include <numeric>
#include <set>

#include "doctest.h"

#include "bcg/cost.hpp"
#include "bcg/equilibria.hpp"
#include "bcg/errors.hpp"
#include "bcg/game.hpp"
#include "bcg/lower_bound.hpp"
#include "bcg/suite.hpp"
#include "helpers.hpp"

using namespace bcg;

TEST_CASE("checked arithmetic reports overflow") {
  const Cost max = ~Cost{0};
  CHECK_THROWS_AS(checked_add(max, 1), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_mul(max / 2 + 1, 2), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_pow(Cost{1} << 64, 2), ArithmeticOverflow);
  CHECK(checked_pow(2, 127) == Cost{1} << 127);
  CHECK(checked_pow(0, 0) == 1);
  CHECK(to_string(checked_pow(10, 30)) == "1" + std::string(30, '0'));
  CHECK(to_string(0) == "0");
}

TEST_CASE("rationals stay in lowest terms and compare exactly") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(6, 4).to_string() == "3/2");
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(0, 5) == Rational(0, 1));
  CHECK_THROWS_AS(Rational(1, 0), ArithmeticOverflow);
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  CHECK(Rational(big - 1, big) < Rational(big, big - 1));
}

TEST_CASE("delay is an exact power") {
  CHECK(delay(0, 3) == 0);
  CHECK(delay(4, 1) == 4);
  CHECK(delay(4, 2) == 16);
  CHECK(delay(12, 3) == 12 * 12 * 12);
  CHECK_THROWS_AS(delay(std::uint64_t{1} << 40, 4), ArithmeticOverflow);
  for (std::uint64_t c = 0; c < 30; ++c) CHECK(delay(c + 1, 3) > delay(c, 3));
}

TEST_CASE("game validation") {
  CHECK_THROWS_AS(Game(0, 1, {{{0}}}), ValidationError);
  CHECK_THROWS_AS(Game(2, 0, {{{0}}}), ValidationError);
  CHECK_THROWS_AS(Game(2, 1, {}), ValidationError);
  CHECK_THROWS_AS(Game(2, 1, {{}}), ValidationError);
  CHECK_THROWS_AS(Game(2, 1, {{{}}}), ValidationError);
  CHECK_THROWS_AS(Game(2, 1, {{{0, 0}}}), ValidationError);
  CHECK_THROWS_AS(Game(2, 1, {{{2}}}), ValidationError);
  const Game g(3, 1, {{{2, 0}}});
  CHECK(g.strategy(0, 0) == Strategy{0, 2});
  CHECK_THROWS_AS(g.validate_profile({1}), ValidationError);
  CHECK_THROWS_AS(g.validate_profile({0, 0}), ValidationError);
  CHECK_THROWS_AS(player_cost(g, {0}, 3), ValidationError);
}

TEST_CASE("congestion, bottleneck and costs on the lower-bound family") {
  const LowerBoundInstance lb = generate_lower_bound(4, 1);
  const CongestionVector s = congestion_of(lb.game, lb.state_s);
  CHECK(s[0] == 4);
  CHECK(std::accumulate(s.begin() + 1, s.end(), 0u) == 0);
  CHECK(bottleneck(s) == 4);
  CHECK(bottleneck(congestion_of(lb.game, lb.state_s_star)) == 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(player_cost(lb.game, lb.state_s, i) == 4);
  CHECK(profile_length(lb.game, lb.state_s_star) == 4);
  CHECK(profile_length(lb.game, lb.state_s) == 1);
  CHECK(bottleneck(CongestionVector(5, 0)) == 0);
  CHECK(bottleneck(CongestionVector{}) == 0);

  const LowerBoundInstance m2 = generate_lower_bound(3, 2);
  const CongestionVector c = congestion_of(m2.game, m2.state_s);
  CHECK(deviation_cost(m2.game, m2.state_s, c, 1, 1) == 9);
}

TEST_CASE("single player on a single resource pays one") {
  for (int m = 1; m <= 5; ++m) CHECK(player_cost(Game(1, m, {{{0}}}), {0}, 0) == 1);
}

TEST_CASE("congestion matches a per-resource recount and conserves incidences") {
  RunConfig config;
  config.max_players = 5;
  config.max_resources = 7;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 0);
    const Game g = random_game(rng, config);
    for (const Profile& p : testing::all_profiles(g)) {
      const CongestionVector c = congestion_of(g, p);
      CHECK(c == testing::recount(g, p));
      std::size_t incidences = 0;
      for (std::size_t i = 0; i < g.num_players(); ++i) incidences += g.strategy(i, p[i]).size();
      CHECK(std::accumulate(c.begin(), c.end(), std::size_t{0}) == incidences);
    }
  }
}

TEST_CASE("adding a player never lowers anyone else's cost") {
  RunConfig config;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 1);
    const Game g = random_game(rng, config);
    std::vector<StrategySet> more = g.players();
    more.push_back(g.players().front());
    const Game bigger(g.num_resources(), g.degree(), more);
    for (const Profile& p : testing::all_profiles(g)) {
      Profile q = p;
      q.push_back(0);
      for (std::size_t i = 0; i < g.num_players(); ++i) CHECK(player_cost(bigger, q, i) >= player_cost(g, p, i));
    }
  }
}

TEST_CASE("best response and Nash test agree with brute force") {
  RunConfig config;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 2);
    const Game g = random_game(rng, config);
    for (const Profile& p : testing::all_profiles(g)) {
      CHECK(is_nash(g, p) == testing::brute_nash(g, p));
      for (std::size_t i = 0; i < g.num_players(); ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < g.strategies(i).size(); ++k) {
          if (testing::switched_cost(g, p, i, k) < testing::switched_cost(g, p, i, best)) best = k;
        }
        CHECK(best_response(g, p, i) == best);
      }
    }
  }
}

TEST_CASE("best response keeps the direct strategy under indifference") {
  const LowerBoundInstance lb = generate_lower_bound(4, 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(best_response(lb.game, lb.state_s, i) == 0);
  CHECK(is_nash(lb.game, lb.state_s));
  // e lies on player 0's path, so at S* player 0 can shrink to {e} and pay 1
  // instead of n^M. S* is optimal but never stable.
  for (std::uint32_t n = 2; n <= 4; ++n) {
    const LowerBoundInstance inst = generate_lower_bound(n, 1);
    CHECK(is_nash(inst.game, inst.state_s_star) == testing::brute_nash(inst.game, inst.state_s_star));
    CHECK(!is_nash(inst.game, inst.state_s_star));
    CHECK(best_response(inst.game, inst.state_s_star, 0) == 0);
  }
  CHECK(is_nash(Game(2, 2, {{{0}, {0, 1}}}), {0}));
}

TEST_CASE("potential values and exact descent") {
  CHECK(rosenthal_potential(Game(1, 2, {{{0}}, {{0}}}), {0, 0}) == 5);
  RunConfig config;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 3);
    const Game g = random_game(rng, config);
    for (const Profile& p : testing::all_profiles(g)) {
      const auto phi = static_cast<long long>(rosenthal_potential(g, p));
      for (std::size_t i = 0; i < g.num_players(); ++i) {
        for (std::size_t k = 0; k < g.strategies(i).size(); ++k) {
          Profile q = p;
          q[i] = k;
          const auto dphi = static_cast<long long>(rosenthal_potential(g, q)) - phi;
          const auto dpc = static_cast<long long>(testing::switched_cost(g, p, i, k)) -
                           static_cast<long long>(testing::switched_cost(g, p, i, p[i]));
          CHECK(dphi == dpc);
        }
      }
    }
  }
}

TEST_CASE("best-response dynamics") {
  const LowerBoundInstance lb = generate_lower_bound(3, 2);
  const EquilibriumReport fixed = best_response_dynamics(lb.game, lb.state_s, 10);
  CHECK(fixed.moves == 0);
  CHECK(fixed.profile == lb.state_s);
  CHECK(fixed.bottleneck == 3);

  // Two players, one shared and one private resource each: the second player
  // moves away once.
  const Game g(3, 1, {{{0}, {1}}, {{0}, {2}}});
  std::vector<MoveRecord> moves;
  const EquilibriumReport r = best_response_dynamics(g, {0, 0}, 10, [&](const MoveRecord& m) { moves.push_back(m); });
  CHECK(r.is_nash);
  CHECK(r.profile == Profile{1, 0});
  REQUIRE(moves.size() == 1);
  CHECK(moves[0].player == 0);
  CHECK(moves[0].cost_before == 2);
  CHECK(moves[0].cost_after == 1);
  CHECK_THROWS_AS(best_response_dynamics(g, {0, 0}, 0), NonConvergence);

  RunConfig config;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 4);
    const Game game = random_game(rng, config);
    for (const Profile& p : testing::all_profiles(game)) {
      const BrdCheck check = check_best_response(game, p);
      CHECK(check.passed());
    }
  }
}

TEST_CASE("state enumeration") {
  const Game g(2, 1, {{{0}, {1}}, {{0}, {1}}});
  std::vector<Profile> seen(enumerate_states(g).begin(), enumerate_states(g).end());
  CHECK(seen == std::vector<Profile>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const LowerBoundInstance lb = generate_lower_bound(4, 1);
  CHECK(enumerate_states(lb.game).size() == 16);
  const Game h(3, 1, {{{0}, {1}, {2}}, {{0}, {1}}, {{0}, {1}, {2}, {0, 1}}});
  const StateRange range = enumerate_states(h);
  CHECK(range.size() == 24);
  std::uint64_t index = 0;
  for (const Profile& p : range) CHECK(range.at(index++) == p);
  CHECK(index == 24);
  CHECK_THROWS_AS(enumerate_states(h, 23), StateSpaceTooLarge);
  CHECK_THROWS_AS(range.at(24), ValidationError);
}

TEST_CASE("optimum and price of anarchy") {
  CHECK(optimal_profile(Game(2, 1, {{{0}}, {{1}}})).c_star == 1);
  const PoaReport unique = price_of_anarchy(Game(1, 3, {{{0}}, {{0}}}));
  CHECK(unique.poa == Rational(1, 1));
  CHECK(unique.nash_count == 1);

  const LowerBoundInstance lb4 = generate_lower_bound(4, 1);
  const PoaReport r = price_of_anarchy(lb4.game);
  CHECK(r.poa == Rational(4, 1));
  CHECK(r.c_star == 1);
  const auto nash = enumerate_nash(lb4.game);
  CHECK(std::find(nash.begin(), nash.end(), lb4.state_s) != nash.end());
  CHECK(std::find(nash.begin(), nash.end(), lb4.state_s_star) == nash.end());
  CHECK(price_of_anarchy(generate_lower_bound(2, 2).game).poa == Rational(2, 1));

  // Single player: the equilibria are exactly its cheapest strategies.
  const Game solo(3, 2, {{{0, 1}, {2}, {1}, {0, 2}}});
  CHECK(enumerate_nash(solo) == std::vector<Profile>{{1}, {2}});
}

TEST_CASE("price of anarchy matches an independent scan") {
  RunConfig config;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 5);
    const Game g = random_game(rng, config);
    std::uint32_t best = ~0u, worst = 0;
    std::size_t count = 0;
    for (const Profile& p : testing::all_profiles(g)) {
      const auto c = testing::recount(g, p);
      const std::uint32_t b = *std::max_element(c.begin(), c.end());
      best = std::min(best, b);
      if (testing::brute_nash(g, p)) {
        worst = std::max(worst, b);
        ++count;
      }
    }
    const PoaReport r = price_of_anarchy(g);
    CHECK(count >= 1);
    CHECK(r.nash_count == count);
    CHECK(r.c_star == best);
    CHECK(r.c == worst);
    CHECK(r.poa == Rational(worst, best));
    CHECK(r.poa >= Rational(1, 1));
    CHECK(optimal_profile(g).profile == r.optimal);
  }
}

TEST_CASE("Nash set is invariant under player reordering") {
  RunConfig config;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::mt19937_64 rng = game_rng(seed, 6);
    const Game g = random_game(rng, config);
    std::vector<std::size_t> perm(g.num_players());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<StrategySet> sets;
    for (std::size_t i : perm) sets.push_back(g.players()[i]);
    const Game h(g.num_resources(), g.degree(), sets);

    std::set<Profile> relabeled;
    for (const Profile& p : enumerate_nash(h)) {
      Profile q(p.size());
      for (std::size_t k = 0; k < perm.size(); ++k) q[perm[k]] = p[k];
      relabeled.insert(q);
    }
    const auto original = enumerate_nash(g);
    CHECK(relabeled == std::set<Profile>(original.begin(), original.end()));
    CHECK(price_of_anarchy(h).poa == price_of_anarchy(g).poa);
  }
}
