#pragma once

// Type-B to type-A game transformation.
//
// A game sitting in a (worst) Nash state S is rewritten into a dominated game
// in which every player has exactly two strategies: its equilibrium strategy
// and a tracked "optimal" strategy. Players whose equilibrium strategy uses
// two or more resources (type-B) are repeatedly split, via PMS-Partition,
// into smaller players until every resource with congestion above
// psi = max(2M, 3C*) is used only by single-resource (type-A) players.
//
// Throughout, the equilibrium congestion of every resource is unchanged and
// the all-equilibrium profile remains a Nash equilibrium of the induced
// two-strategy game.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcg/cost.hpp"
#include "bcg/game.hpp"
#include "bcg/equilibria.hpp"

namespace bcg {

using PlayerId = std::size_t;

enum class PlayerKind { kTypeA, kTypeB };

struct TwoStrategyPlayer {
  Strategy eq;   // equilibrium strategy, sorted
  Strategy opt;  // tracked optimal strategy, sorted
  bool marked = false;

  PlayerKind kind() const { return eq.size() == 1 ? PlayerKind::kTypeA : PlayerKind::kTypeB; }
};

// Workspace of the transformation: a mutable roster of two-strategy players
// over a fixed resource set. The equilibrium congestion vector is captured at
// construction and every mutation must preserve it.
class TwoStrategyGame {
 public:
  // `players` are (eq, opt) pairs. C is the bottleneck of the eq strategies;
  // c_star is the optimal bottleneck of the original game.
  TwoStrategyGame(std::size_t num_resources, int degree, std::uint32_t c_star,
                  std::vector<std::pair<Strategy, Strategy>> players);

  std::size_t num_resources() const { return num_resources_; }
  int degree() const { return degree_; }
  std::uint32_t c() const { return c_; }
  std::uint32_t c_star() const { return c_star_; }
  std::uint32_t psi() const { return psi_; }

  // Equilibrium congestion captured at construction.
  std::span<const std::uint32_t> congestion() const { return congestion_; }
  std::uint32_t congestion(ResourceId r) const { return congestion_.at(r); }

  PlayerId add_player(Strategy eq, Strategy opt, bool marked = false);
  void remove_player(PlayerId id);
  bool contains(PlayerId id) const { return players_.contains(id); }
  const TwoStrategyPlayer& player(PlayerId id) const;
  TwoStrategyPlayer& player(PlayerId id);
  const std::map<PlayerId, TwoStrategyPlayer>& players() const { return players_; }
  std::vector<PlayerId> player_ids() const;

  // Cost of the player's eq strategy under the captured congestion.
  Cost eq_cost(const TwoStrategyPlayer& p) const;
  // Cost the player would pay by switching to its opt strategy.
  Cost deviation_cost(const TwoStrategyPlayer& p) const;
  bool in_equilibrium(const TwoStrategyPlayer& p) const { return eq_cost(p) <= deviation_cost(p); }
  Cost eq_cost(PlayerId id) const { return eq_cost(player(id)); }

  // Congestion recounted from the current roster.
  CongestionVector eq_congestion() const;
  CongestionVector opt_congestion() const;
  // Bottleneck of the tracked optimal profile: an upper bound on the optimum
  // of the induced game.
  std::uint32_t tracked_opt_bottleneck() const;

  // The induced game: players in id order, strategy 0 = eq, strategy 1 = opt.
  // The all-zero profile is the equilibrium state.
  Game induced_game() const;
  // Re-checks the equilibrium via the generic Nash test on induced_game().
  bool induced_is_nash() const;

 private:
  std::size_t num_resources_;
  int degree_;
  std::uint32_t c_star_;
  std::uint32_t c_ = 0;
  std::uint32_t psi_ = 0;
  CongestionVector congestion_;
  std::map<PlayerId, TwoStrategyPlayer> players_;
  PlayerId next_id_ = 0;
};

// A resource together with its equilibrium congestion.
struct ResourceLoad {
  ResourceId id;
  std::uint32_t congestion;
};

// One (L, L*) element of a PMS-Partition. `eq_part` lists resources in
// decreasing congestion order and `opt_part` in increasing congestion order
// (ties by id), i.e. in the order of the underlying linear partition.
struct PartitionPair {
  std::vector<ResourceId> eq_part;
  std::vector<ResourceId> opt_part;
};

// PMS-Partition of an equilibrium set against a disjoint optimal set.
//
// Requires sum_{opt} (C+1)^M >= sum_{eq} C^M. Produces pairs such that the
// eq parts partition `eq`; each pair covers its eq part,
// sum_{L*} (C+1)^M >= sum_{L} C^M; each pair has |L| = 1 or |L*| = 1; the opt
// parts walk the sorted opt list contiguously, consecutive parts sharing at
// most their boundary resource; and no opt resource is in more than two
// pairs. Trailing opt resources are absorbed into the last pair when that pair
// has a single eq resource, and dropped otherwise.
std::vector<PartitionPair> pms_partition(std::span<const ResourceLoad> eq,
                                         std::span<const ResourceLoad> opt, int degree);
std::vector<PartitionPair> pms_partition(const TwoStrategyGame& tsg, PlayerId player);

struct TransformOptions {
  // Re-verify congestion and equilibrium after every mutating step.
  bool check_invariants = true;
  // Receives one JSON object (serialized, no newline) per operation.
  std::function<void(const std::string&)> trace;
};

// Two-strategy workspace seeded from a Nash profile and an optimal profile.
// Throws PreconditionError if `nash` is not a Nash equilibrium.
TwoStrategyGame init_two_strategy(const Game& game, const Profile& nash, const Profile& optimal);

// Splits every player whose eq and opt strategies overlap into one type-A
// player per shared resource (eq = opt = {r}) plus a residual player on the
// disjoint remainders, then prunes redundant opt resources of type-A players.
void clean_game(TwoStrategyGame& tsg, const TransformOptions& options = {});

// Replaces a type-B player by one player per PMS-Partition pair. Returns the
// new ids in pair order.
std::vector<PlayerId> partition_transform(TwoStrategyGame& tsg, PlayerId player,
                                          const TransformOptions& options = {});

// For a player whose opt strategy is a single resource x with C_x above the
// phase index, repeatedly trades x for (part of) the opt strategy of a type-A
// player sitting on x. Eq and opt congestion on x and on the traded resources
// are unchanged; other resources can only lose opt load.
void eliminate_high_congestion(TwoStrategyGame& tsg, std::uint32_t phase_index, PlayerId player,
                               const TransformOptions& options = {});

// Working sets of one phase.
struct PhaseState {
  std::uint32_t phase_index = 0;
  std::vector<PlayerId> pi;        // type-B players in the phase's cost band
  std::vector<PlayerId> d;         // multi-resource opt strategies below the index
  std::vector<PlayerId> e;         // singleton opt strategies at the index
  std::vector<ResourceId> x;       // resources with congestion == phase index
  std::vector<ResourceId> r_a;     // resources of x carrying type-A players, marking order
  std::size_t cursor = 0;          // round-robin position in r_a
};

struct PhaseSummary {
  std::uint32_t phase_index = 0;
  std::size_t pi_initial = 0;
  std::size_t partition_calls = 0;
  std::size_t eliminations = 0;
  std::size_t d_size = 0;
  std::size_t e_size = 0;
  std::size_t marks = 0;
  std::uint32_t max_marks_on_resource = 0;
  // Over E-step partitions: fewest players produced and most produced
  // type-B players still above the phase's lower cost bound.
  std::size_t e_min_new_players = 0;
  std::size_t e_max_heavy_type_b = 0;
};

// One phase with index w: afterwards no type-B player costs more than w^M.
// Requires that no type-B player costs more than (w+1)^M on entry.
PhaseSummary run_phase(TwoStrategyGame& tsg, std::uint32_t phase_index,
                       const TransformOptions& options = {});

struct TransformResult {
  TwoStrategyGame game;
  std::vector<PhaseSummary> phases;
  std::size_t preprocessing_calls = 0;
  bool noop = false;  // C <= psi: only cleaning was applied
};

// Full transformation of `game` in Nash state `nash` with optimal state
// `optimal`. Throws PreconditionError if `nash` is not Nash and
// StructuralError (with a state dump) if an internal invariant breaks.
TransformResult transform_to_type_a(const Game& game, const Profile& nash, const Profile& optimal,
                                    const TransformOptions& options = {});

struct DominationReport {
  bool resources_ok = false;
  bool degree_ok = false;
  bool congestion_equal = false;  // per-resource eq congestion identical
  bool opt_lower_ok = false;      // C* <= tracked optimum
  bool opt_upper_ok = false;      // tracked optimum <= 7 C*
  std::uint32_t c = 0;
  std::uint32_t c_transformed = 0;
  std::uint32_t c_star = 0;
  std::uint32_t tracked_opt = 0;
  Rational beta_observed;

  bool passed() const {
    return resources_ok && degree_ok && congestion_equal && opt_lower_ok && opt_upper_ok;
  }
};

inline constexpr std::uint32_t kDominationFactor = 7;

// Checks that `transformed` is dominated by the original game. Throws
// DominationViolation on failure; the message lists the failed checks.
DominationReport verify_domination(const Game& game, const Profile& nash, const Profile& optimal,
                                   const TwoStrategyGame& transformed);

}  // namespace bcg
