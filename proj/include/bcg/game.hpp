#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bcg/cost.hpp"

namespace bcg {

// Dense resource index in [0, num_resources).
using ResourceId = std::uint32_t;

// A pure strategy: a set of resources, stored sorted and duplicate-free.
using Strategy = std::vector<ResourceId>;
using StrategySet = std::vector<Strategy>;

// One strategy index per player.
using Profile = std::vector<std::size_t>;

// Number of players on each resource.
using CongestionVector = std::vector<std::uint32_t>;

// A polynomial bottleneck congestion game: every resource has delay C_r^M and
// the social cost of a state is its maximum congestion. Immutable once
// constructed, so it can be shared freely between threads.
class Game {
 public:
  // Strategies are sorted on construction. Throws ValidationError when there
  // are no players or resources, degree < 1, a player has no strategies, a
  // strategy is empty, repeats a resource, or names an id out of range.
  Game(std::size_t num_resources, int degree, std::vector<StrategySet> players);

  std::size_t num_resources() const { return num_resources_; }
  int degree() const { return degree_; }
  std::size_t num_players() const { return players_.size(); }
  const StrategySet& strategies(std::size_t player) const;
  const Strategy& strategy(std::size_t player, std::size_t index) const;
  const std::vector<StrategySet>& players() const { return players_; }

  // Throws ValidationError unless the profile has one in-range choice per
  // player.
  void validate_profile(const Profile& profile) const;

  // The strategies chosen by `profile`, one per player.
  std::vector<Strategy> chosen(const Profile& profile) const;

  friend bool operator==(const Game&, const Game&) = default;

 private:
  std::size_t num_resources_;
  int degree_;
  std::vector<StrategySet> players_;
};

// Per-resource count of players using it.
CongestionVector congestion_of(const Game& game, const Profile& profile);

// Congestion vector induced by an explicit list of strategies.
CongestionVector congestion_of(std::size_t num_resources, std::span<const Strategy> strategies);

// C(S) = max_r C_r; 0 for an empty vector.
std::uint32_t bottleneck(std::span<const std::uint32_t> congestion);

// d_r = congestion^degree, exact.
Cost delay(std::uint64_t congestion, int degree);

// pc_i(S) = sum of delays over the player's chosen resources.
Cost player_cost(const Game& game, const Profile& profile, std::size_t player);
Cost player_cost(const Game& game, const Profile& profile,
                 std::span<const std::uint32_t> congestion, std::size_t player);

// L(S): the largest chosen strategy.
std::size_t profile_length(const Game& game, const Profile& profile);

// Sorts and validates a resource set against `num_resources`.
Strategy make_strategy(std::vector<ResourceId> resources, std::size_t num_resources);

}  // namespace bcg
