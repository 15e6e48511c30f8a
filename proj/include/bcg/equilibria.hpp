#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <vector>

#include "bcg/cost.hpp"
#include "bcg/game.hpp"

namespace bcg {

inline constexpr std::uint64_t kDefaultStateCap = 10'000'000;

// Cost player `player` would pay after unilaterally switching to strategy
// `candidate`: each resource contributes (C_r without the player + 1)^M.
// `congestion` must be congestion_of(game, profile).
Cost deviation_cost(const Game& game, const Profile& profile,
                    std::span<const std::uint32_t> congestion, std::size_t player,
                    std::size_t candidate);

// Index of a cost-minimizing strategy for `player` with everyone else fixed.
// Ties go to the lowest index.
std::size_t best_response(const Game& game, const Profile& profile, std::size_t player);

// Weak Nash: no player has a strictly cheaper unilateral deviation.
bool is_nash(const Game& game, const Profile& profile);

// Rosenthal potential sum_r sum_{j=1}^{C_r} j^M.
Cost rosenthal_potential(const Game& game, const Profile& profile);

struct EquilibriumReport {
  Profile profile;
  std::uint32_t bottleneck = 0;
  bool is_nash = false;
  Cost potential = 0;
  std::size_t moves = 0;
};

struct MoveRecord {
  std::size_t player;
  std::size_t from;
  std::size_t to;
  Cost cost_before;
  Cost cost_after;
};

// Round-robin best-response dynamics. A player moves only when its best
// response is strictly cheaper. Each move strictly lowers the potential, so
// the run always terminates; `max_steps` bounds the number of moves and
// NonConvergence is thrown if it is hit first.
EquilibriumReport best_response_dynamics(const Game& game, Profile start, std::size_t max_steps,
                                         const std::function<void(const MoveRecord&)>& on_move = {});

// Lexicographic walk over the full product space (last player varies
// fastest).
class StateRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Profile;
    using difference_type = std::ptrdiff_t;
    using pointer = const Profile*;
    using reference = const Profile&;

    iterator() = default;
    const Profile& operator*() const { return current_; }
    const Profile* operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    friend class StateRange;
    iterator(const std::vector<std::size_t>* sizes, std::uint64_t index, Profile current)
        : sizes_(sizes), index_(index), current_(std::move(current)) {}

    const std::vector<std::size_t>* sizes_ = nullptr;
    std::uint64_t index_ = 0;
    Profile current_;
  };

  iterator begin() const;
  iterator end() const;
  std::uint64_t size() const { return count_; }

  // Profile at lexicographic position `index`; lets callers split the range
  // into independent chunks.
  Profile at(std::uint64_t index) const;

 private:
  friend StateRange enumerate_states(const Game&, std::uint64_t);
  StateRange(std::vector<std::size_t> sizes, std::uint64_t count)
      : sizes_(std::move(sizes)), count_(count) {}

  std::vector<std::size_t> sizes_;
  std::uint64_t count_;
};

// Throws StateSpaceTooLarge when the product of strategy-set sizes exceeds
// `cap`.
StateRange enumerate_states(const Game& game, std::uint64_t cap = kDefaultStateCap);

struct OptimalProfile {
  Profile profile;
  std::uint32_t c_star = 0;
};

// Exhaustive argmin of the bottleneck; lexicographically first on ties.
OptimalProfile optimal_profile(const Game& game, std::uint64_t cap = kDefaultStateCap);

// Every pure Nash equilibrium, in lexicographic order.
std::vector<Profile> enumerate_nash(const Game& game, std::uint64_t cap = kDefaultStateCap);

struct PoaReport {
  Profile worst_nash;
  Profile optimal;
  std::uint32_t c = 0;       // bottleneck of worst_nash
  std::uint32_t c_star = 0;  // bottleneck of optimal
  Rational poa;
  std::size_t nash_count = 0;
};

// Worst Nash bottleneck over optimal bottleneck, exact. The worst equilibrium
// is the lexicographically first one attaining the maximum.
PoaReport price_of_anarchy(const Game& game, std::uint64_t cap = kDefaultStateCap);

}  // namespace bcg
