#pragma once

// Random game generators and the end-to-end verification suite.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcg/equilibria.hpp"
#include "bcg/game.hpp"

namespace bcg {

struct RunConfig {
  std::size_t count = 10;
  std::size_t max_players = 4;
  std::size_t max_resources = 6;
  std::size_t max_strategies = 3;
  int min_degree = 1;
  int max_degree = 3;
  std::uint64_t seed = 1;
  std::uint64_t state_cap = kDefaultStateCap;
  std::size_t brd_starts = 5;
  // Mix in games built to have worst-equilibrium congestion above psi, so the
  // transformation has real work to do.
  std::size_t forced_count = 0;
};

// Per-game generator stream. Game `index` of a run seeded with `seed` always
// sees the same sequence, independent of other games.
std::mt19937_64 game_rng(std::uint64_t seed, std::uint64_t index);

// Players 2..P, resources 2..Z, strategies 2..K per player, each strategy a
// uniform nonempty subset of at most 3 resources; degree uniform in range.
Game random_game(std::mt19937_64& rng, const RunConfig& config);

// A hub resource shared by everyone, a few side resources and one long
// private path per player. Games are redrawn until the worst equilibrium has
// bottleneck above psi = max(2M, 3C*).
struct ForcedGame {
  Game game;
  PoaReport poa;
};
ForcedGame forced_congestion_game(std::mt19937_64& rng, std::uint64_t state_cap = kDefaultStateCap);

// Best-response run with the potential checked after every move.
struct BrdCheck {
  bool converged = false;
  bool ended_in_nash = false;
  std::size_t moves = 0;
  Cost start_potential = 0;
  bool moves_within_potential = false;  // moves <= potential at the start
  bool exact_descent = false;           // each move lowers it by the mover's gain
  bool passed() const { return converged && ended_in_nash && moves_within_potential && exact_descent; }
};
BrdCheck check_best_response(const Game& game, const Profile& start);

struct SuiteRecord {
  std::size_t index = 0;
  bool forced = false;
  std::size_t num_resources = 0;
  std::size_t num_players = 0;
  int degree = 0;
  std::uint32_t c = 0;
  std::uint32_t c_star = 0;
  std::string poa;
  double bound = 0;
  std::size_t nash_count = 0;
  bool bound_ok = false;
  bool brd_ok = false;
  bool transform_ok = false;
  bool transform_noop = false;
  std::string beta_observed;
  bool expansion_ok = false;
  std::size_t v1_nodes = 0;
  std::string error;  // first failure, if any

  bool passed() const { return error.empty() && bound_ok && brd_ok && transform_ok && expansion_ok; }
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<SuiteRecord> records;
  bool passed() const;
};

// Full pipeline on one game: enumeration, upper bound, dynamics, transform,
// domination and expansion checks.
SuiteRecord analyze_game(const Game& game, std::mt19937_64& rng, const RunConfig& config);

// Deterministic for a fixed config. Games run in parallel; records come back
// in index order.
SuiteReport run_suite(const RunConfig& config);

nlohmann::json to_json(const SuiteRecord& record);
nlohmann::json to_json(const SuiteReport& report);

}  // namespace bcg
