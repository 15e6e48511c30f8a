#include "bcg/game.hpp"

#include <algorithm>
#include <string>

#include "bcg/errors.hpp"

namespace bcg {

Strategy make_strategy(std::vector<ResourceId> resources, std::size_t num_resources) {
  if (resources.empty()) throw ValidationError("strategy must use at least one resource");
  std::sort(resources.begin(), resources.end());
  if (std::adjacent_find(resources.begin(), resources.end()) != resources.end()) {
    throw ValidationError("strategy repeats resource " +
                          std::to_string(*std::adjacent_find(resources.begin(), resources.end())));
  }
  if (resources.back() >= num_resources) {
    throw ValidationError("resource id " + std::to_string(resources.back()) +
                          " out of range for " + std::to_string(num_resources) + " resources");
  }
  return resources;
}

Game::Game(std::size_t num_resources, int degree, std::vector<StrategySet> players)
    : num_resources_(num_resources), degree_(degree), players_(std::move(players)) {
  if (num_resources_ == 0) throw ValidationError("game needs at least one resource");
  if (degree_ < 1) throw ValidationError("degree must be >= 1, got " + std::to_string(degree_));
  if (players_.empty()) throw ValidationError("game needs at least one player");
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (players_[i].empty()) {
      throw ValidationError("player " + std::to_string(i) + " has no strategies");
    }
    for (Strategy& s : players_[i]) {
      try {
        s = make_strategy(std::move(s), num_resources_);
      } catch (const ValidationError& e) {
        throw ValidationError("player " + std::to_string(i) + ": " + e.what());
      }
    }
  }
}

const StrategySet& Game::strategies(std::size_t player) const {
  if (player >= players_.size()) {
    throw ValidationError("player id " + std::to_string(player) + " out of range");
  }
  return players_[player];
}

const Strategy& Game::strategy(std::size_t player, std::size_t index) const {
  const StrategySet& set = strategies(player);
  if (index >= set.size()) {
    throw ValidationError("strategy index " + std::to_string(index) + " out of range for player " +
                          std::to_string(player));
  }
  return set[index];
}

void Game::validate_profile(const Profile& profile) const {
  if (profile.size() != players_.size()) {
    throw ValidationError("profile has " + std::to_string(profile.size()) + " entries, game has " +
                          std::to_string(players_.size()) + " players");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= players_[i].size()) {
      throw ValidationError("profile choice " + std::to_string(profile[i]) + " invalid for player " +
                            std::to_string(i));
    }
  }
}

std::vector<Strategy> Game::chosen(const Profile& profile) const {
  validate_profile(profile);
  std::vector<Strategy> out;
  out.reserve(players_.size());
  for (std::size_t i = 0; i < players_.size(); ++i) out.push_back(players_[i][profile[i]]);
  return out;
}

CongestionVector congestion_of(const Game& game, const Profile& profile) {
  game.validate_profile(profile);
  CongestionVector c(game.num_resources(), 0);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (ResourceId r : game.players()[i][profile[i]]) ++c[r];
  }
  return c;
}

CongestionVector congestion_of(std::size_t num_resources, std::span<const Strategy> strategies) {
  CongestionVector c(num_resources, 0);
  for (const Strategy& s : strategies) {
    for (ResourceId r : s) {
      if (r >= num_resources) throw ValidationError("resource id out of range");
      ++c[r];
    }
  }
  return c;
}

std::uint32_t bottleneck(std::span<const std::uint32_t> congestion) {
  std::uint32_t best = 0;
  for (std::uint32_t c : congestion) best = std::max(best, c);
  return best;
}

Cost delay(std::uint64_t congestion, int degree) { return checked_pow(congestion, degree); }

Cost player_cost(const Game& game, const Profile& profile,
                 std::span<const std::uint32_t> congestion, std::size_t player) {
  const Strategy& s = game.strategy(player, profile.at(player));
  Cost total = 0;
  for (ResourceId r : s) total = checked_add(total, delay(congestion[r], game.degree()));
  return total;
}

Cost player_cost(const Game& game, const Profile& profile, std::size_t player) {
  if (player >= game.num_players()) {
    throw ValidationError("player id " + std::to_string(player) + " out of range");
  }
  const CongestionVector c = congestion_of(game, profile);
  return player_cost(game, profile, c, player);
}

std::size_t profile_length(const Game& game, const Profile& profile) {
  game.validate_profile(profile);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    longest = std::max(longest, game.players()[i][profile[i]].size());
  }
  return longest;
}

}  // namespace bcg
