#include "bcg/equilibria.hpp"

#include <algorithm>
#include <string>

#include "bcg/errors.hpp"

namespace bcg {

namespace {

bool contains(const Strategy& s, ResourceId r) { return std::binary_search(s.begin(), s.end(), r); }

// Nash test against a precomputed congestion vector.
bool is_nash_with(const Game& game, const Profile& profile, std::span<const std::uint32_t> congestion) {
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const Cost current = player_cost(game, profile, congestion, i);
    const StrategySet& set = game.players()[i];
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (k == profile[i]) continue;
      if (deviation_cost(game, profile, congestion, i, k) < current) return false;
    }
  }
  return true;
}

}  // namespace

Cost deviation_cost(const Game& game, const Profile& profile,
                    std::span<const std::uint32_t> congestion, std::size_t player,
                    std::size_t candidate) {
  const Strategy& current = game.strategy(player, profile.at(player));
  const Strategy& target = game.strategy(player, candidate);
  Cost total = 0;
  for (ResourceId r : target) {
    const std::uint64_t others = congestion[r] - (contains(current, r) ? 1 : 0);
    total = checked_add(total, delay(others + 1, game.degree()));
  }
  return total;
}

std::size_t best_response(const Game& game, const Profile& profile, std::size_t player) {
  const CongestionVector c = congestion_of(game, profile);
  const StrategySet& set = game.strategies(player);
  std::size_t best = 0;
  Cost best_cost = deviation_cost(game, profile, c, player, 0);
  for (std::size_t k = 1; k < set.size(); ++k) {
    const Cost cost = deviation_cost(game, profile, c, player, k);
    if (cost < best_cost) {
      best = k;
      best_cost = cost;
    }
  }
  return best;
}

bool is_nash(const Game& game, const Profile& profile) {
  const CongestionVector c = congestion_of(game, profile);
  return is_nash_with(game, profile, c);
}

Cost rosenthal_potential(const Game& game, const Profile& profile) {
  const CongestionVector c = congestion_of(game, profile);
  Cost phi = 0;
  for (std::uint32_t load : c) {
    for (std::uint32_t j = 1; j <= load; ++j) phi = checked_add(phi, delay(j, game.degree()));
  }
  return phi;
}

EquilibriumReport best_response_dynamics(const Game& game, Profile start, std::size_t max_steps,
                                         const std::function<void(const MoveRecord&)>& on_move) {
  game.validate_profile(start);
  Profile profile = std::move(start);
  CongestionVector c = congestion_of(game, profile);
  std::size_t moves = 0;
  const std::size_t n = game.num_players();

  // Stop after n consecutive players decline to move.
  std::size_t idle = 0;
  for (std::size_t i = 0; idle < n; i = (i + 1) % n) {
    const Cost current = player_cost(game, profile, c, i);
    const StrategySet& set = game.players()[i];
    std::size_t best = profile[i];
    Cost best_cost = current;
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (k == profile[i]) continue;
      const Cost cost = deviation_cost(game, profile, c, i, k);
      if (cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
    if (best == profile[i]) {
      ++idle;
      continue;
    }
    if (moves == max_steps) {
      throw NonConvergence("best-response dynamics did not converge within " +
                           std::to_string(max_steps) + " moves");
    }
    for (ResourceId r : set[profile[i]]) --c[r];
    for (ResourceId r : set[best]) ++c[r];
    const std::size_t from = profile[i];
    profile[i] = best;
    ++moves;
    idle = 0;
    if (on_move) on_move(MoveRecord{i, from, best, current, best_cost});
  }

  EquilibriumReport report;
  report.bottleneck = bottleneck(c);
  report.is_nash = is_nash_with(game, profile, c);
  report.potential = rosenthal_potential(game, profile);
  report.moves = moves;
  report.profile = std::move(profile);
  return report;
}

StateRange::iterator& StateRange::iterator::operator++() {
  ++index_;
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (++current_[i] < (*sizes_)[i]) return *this;
    current_[i] = 0;
  }
  return *this;
}

StateRange::iterator StateRange::begin() const {
  return iterator(&sizes_, 0, Profile(sizes_.size(), 0));
}

StateRange::iterator StateRange::end() const { return iterator(&sizes_, count_, Profile{}); }

Profile StateRange::at(std::uint64_t index) const {
  if (index >= count_) throw ValidationError("state index out of range");
  Profile p(sizes_.size(), 0);
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    p[i] = static_cast<std::size_t>(index % sizes_[i]);
    index /= sizes_[i];
  }
  return p;
}

StateRange enumerate_states(const Game& game, std::uint64_t cap) {
  std::vector<std::size_t> sizes;
  std::uint64_t count = 1;
  for (const StrategySet& set : game.players()) {
    sizes.push_back(set.size());
    if (count > cap / set.size()) {
      throw StateSpaceTooLarge("state space exceeds the cap of " + std::to_string(cap) +
                               " profiles");
    }
    count *= set.size();
  }
  return StateRange(std::move(sizes), count);
}

OptimalProfile optimal_profile(const Game& game, std::uint64_t cap) {
  OptimalProfile best;
  bool first = true;
  for (const Profile& p : enumerate_states(game, cap)) {
    const std::uint32_t b = bottleneck(congestion_of(game, p));
    if (first || b < best.c_star) {
      best.profile = p;
      best.c_star = b;
      first = false;
    }
  }
  return best;
}

std::vector<Profile> enumerate_nash(const Game& game, std::uint64_t cap) {
  std::vector<Profile> out;
  for (const Profile& p : enumerate_states(game, cap)) {
    if (is_nash(game, p)) out.push_back(p);
  }
  return out;
}

PoaReport price_of_anarchy(const Game& game, std::uint64_t cap) {
  PoaReport report;
  bool have_opt = false;
  bool have_nash = false;
  for (const Profile& p : enumerate_states(game, cap)) {
    const CongestionVector c = congestion_of(game, p);
    const std::uint32_t b = bottleneck(c);
    if (!have_opt || b < report.c_star) {
      report.optimal = p;
      report.c_star = b;
      have_opt = true;
    }
    if (is_nash_with(game, p, c)) {
      ++report.nash_count;
      if (!have_nash || b > report.c) {
        report.worst_nash = p;
        report.c = b;
        have_nash = true;
      }
    }
  }
  // Rosenthal's potential guarantees a pure equilibrium in every finite game.
  if (!have_nash) throw NonConvergence("no pure Nash equilibrium found");
  report.poa = Rational(report.c, report.c_star);
  return report;
}

}  // namespace bcg
