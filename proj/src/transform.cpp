#include "bcg/transform.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <set>

#include "bcg/errors.hpp"
#include "bcg/json_io.hpp"

namespace bcg {

namespace {

bool has_resource(const Strategy& s, ResourceId r) { return std::binary_search(s.begin(), s.end(), r); }

bool disjoint(const Strategy& a, const Strategy& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

Strategy set_union(const Strategy& a, const Strategy& b) {
  Strategy out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Strategy set_difference(const Strategy& a, const Strategy& b) {
  Strategy out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Strategy set_intersection(const Strategy& a, const Strategy& b) {
  Strategy out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Strategy sorted(std::vector<ResourceId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

[[noreturn]] void structural(const std::string& what, const TwoStrategyGame& tsg) {
  throw StructuralError(what, to_json(tsg).dump());
}

void emit(const TransformOptions& options, const nlohmann::json& event) {
  if (options.trace) options.trace(event.dump());
}

void check_invariants(const TwoStrategyGame& tsg, const TransformOptions& options,
                      const char* where) {
  if (!options.check_invariants) return;
  const CongestionVector recount = tsg.eq_congestion();
  if (!std::equal(recount.begin(), recount.end(), tsg.congestion().begin(), tsg.congestion().end())) {
    structural(std::string("equilibrium congestion changed after ") + where, tsg);
  }
  for (const auto& [id, p] : tsg.players()) {
    if (!tsg.in_equilibrium(p)) {
      structural("player " + std::to_string(id) + " left equilibrium after " + where, tsg);
    }
  }
}

// Drops opt resources a type-A player does not need to stay in equilibrium,
// cheapest contribution first. A removal that would take the tracked optimum
// below C* is skipped; opt_load is kept in step with the removals.
void prune_redundant(TwoStrategyGame& tsg, PlayerId id, CongestionVector& opt_load) {
  TwoStrategyPlayer& p = tsg.player(id);
  if (p.kind() != PlayerKind::kTypeA || p.opt.size() < 2) return;
  const int m = tsg.degree();
  std::vector<ResourceId> order = p.opt;
  auto contribution = [&](ResourceId r) {
    return delay(tsg.congestion(r) + (has_resource(p.eq, r) ? 0 : 1), m);
  };
  std::stable_sort(order.begin(), order.end(), [&](ResourceId a, ResourceId b) {
    return contribution(a) < contribution(b);
  });
  for (ResourceId r : order) {
    if (p.opt.size() == 1) break;
    TwoStrategyPlayer trial = p;
    trial.opt.erase(std::find(trial.opt.begin(), trial.opt.end(), r));
    if (!tsg.in_equilibrium(trial)) continue;
    --opt_load[r];
    if (bottleneck(opt_load) < tsg.c_star()) {
      ++opt_load[r];
      continue;
    }
    p.opt = std::move(trial.opt);
  }
}

// Exact search behind PMS-Partition. States are (next eq index, current opt
// index, uses of the current opt resource so far); the preferred move is tried
// first and a memoized feasibility table keeps the greedy from painting itself
// into a corner.
class PmsSearch {
 public:
  struct Step {
    std::size_t eq_begin, eq_end, opt_begin, opt_end;
  };
  struct State {
    std::size_t j, p;
    int used;
  };

  PmsSearch(std::vector<Cost> need, std::vector<Cost> cap)
      : need_(std::move(need)), cap_(std::move(cap)),
        memo_((need_.size() + 1) * (cap_.size() + 1) * 2, kUnknown) {}

  bool solve(std::vector<Step>& out) {
    State s{0, 0, 0};
    if (!feasible(s)) return false;
    while (s.j < need_.size()) {
      bool advanced = false;
      for (const auto& [step, next] : moves(s)) {
        if (feasible(next)) {
          out.push_back(step);
          s = next;
          advanced = true;
          break;
        }
      }
      if (!advanced) return false;
    }
    return true;
  }

 private:
  static constexpr signed char kUnknown = -1;

  std::vector<std::pair<Step, State>> moves(const State& s) const {
    std::vector<std::pair<Step, State>> out;
    const std::size_t k = need_.size();
    const std::size_t m = cap_.size();
    if (s.p >= m) return out;
    if (cap_[s.p] >= need_[s.j]) {
      // One opt resource covers a run of eq resources; longest run first.
      Cost sum = 0;
      std::size_t end = s.j;
      while (end < k && sum + need_[end] <= cap_[s.p]) sum += need_[end++];
      for (std::size_t e = end; e > s.j; --e) {
        const Step step{s.j, e, s.p, s.p + 1};
        out.push_back({step, State{e, s.p + 1, 0}});
        if (s.used == 0) out.push_back({step, State{e, s.p, 1}});
      }
      return out;
    }
    // One eq resource needs a run of opt resources.
    Cost sum = 0;
    for (std::size_t q = s.p; q < m; ++q) {
      sum += cap_[q];
      if (sum >= need_[s.j]) {
        const Step step{s.j, s.j + 1, s.p, q + 1};
        out.push_back({step, State{s.j + 1, q + 1, 0}});
        out.push_back({step, State{s.j + 1, q, 1}});
        break;
      }
    }
    return out;
  }

  bool feasible(const State& s) {
    if (s.j == need_.size()) return true;
    const std::size_t key = (s.j * (cap_.size() + 1) + s.p) * 2 + static_cast<std::size_t>(s.used);
    if (memo_[key] != kUnknown) return memo_[key] == 1;
    memo_[key] = 0;
    bool ok = false;
    for (const auto& [step, next] : moves(s)) {
      if (feasible(next)) {
        ok = true;
        break;
      }
    }
    memo_[key] = ok ? 1 : 0;
    return ok;
  }

  std::vector<Cost> need_;
  std::vector<Cost> cap_;
  std::vector<signed char> memo_;
};

std::vector<ResourceLoad> loads(const TwoStrategyGame& tsg, const Strategy& s) {
  std::vector<ResourceLoad> out;
  out.reserve(s.size());
  for (ResourceId r : s) out.push_back({r, tsg.congestion(r)});
  return out;
}

bool is_heavy_type_b(const TwoStrategyGame& tsg, PlayerId id, Cost lower) {
  const TwoStrategyPlayer& p = tsg.player(id);
  return p.kind() == PlayerKind::kTypeB && tsg.eq_cost(p) > lower;
}

}  // namespace

// ---------------------------------------------------------------------------
// TwoStrategyGame

TwoStrategyGame::TwoStrategyGame(std::size_t num_resources, int degree, std::uint32_t c_star,
                                 std::vector<std::pair<Strategy, Strategy>> players)
    : num_resources_(num_resources), degree_(degree), c_star_(c_star) {
  if (num_resources_ == 0) throw ValidationError("two-strategy game needs resources");
  if (degree_ < 1) throw ValidationError("degree must be >= 1");
  if (c_star_ < 1) throw ValidationError("optimal bottleneck must be >= 1");
  std::vector<Strategy> eqs;
  for (auto& [eq, opt] : players) {
    eq = make_strategy(std::move(eq), num_resources_);
    opt = make_strategy(std::move(opt), num_resources_);
    eqs.push_back(eq);
  }
  congestion_ = congestion_of(num_resources_, eqs);
  c_ = bottleneck(congestion_);
  psi_ = std::max<std::uint32_t>(2 * static_cast<std::uint32_t>(degree_), 3 * c_star_);
  for (auto& [eq, opt] : players) add_player(std::move(eq), std::move(opt));
}

PlayerId TwoStrategyGame::add_player(Strategy eq, Strategy opt, bool marked) {
  eq = make_strategy(std::move(eq), num_resources_);
  opt = make_strategy(std::move(opt), num_resources_);
  const PlayerId id = next_id_++;
  players_.emplace(id, TwoStrategyPlayer{std::move(eq), std::move(opt), marked});
  return id;
}

void TwoStrategyGame::remove_player(PlayerId id) {
  if (players_.erase(id) == 0) throw ValidationError("no player " + std::to_string(id));
}

const TwoStrategyPlayer& TwoStrategyGame::player(PlayerId id) const {
  auto it = players_.find(id);
  if (it == players_.end()) throw ValidationError("no player " + std::to_string(id));
  return it->second;
}

TwoStrategyPlayer& TwoStrategyGame::player(PlayerId id) {
  auto it = players_.find(id);
  if (it == players_.end()) throw ValidationError("no player " + std::to_string(id));
  return it->second;
}

std::vector<PlayerId> TwoStrategyGame::player_ids() const {
  std::vector<PlayerId> ids;
  ids.reserve(players_.size());
  for (const auto& [id, p] : players_) ids.push_back(id);
  return ids;
}

Cost TwoStrategyGame::eq_cost(const TwoStrategyPlayer& p) const {
  Cost total = 0;
  for (ResourceId r : p.eq) total = checked_add(total, delay(congestion_[r], degree_));
  return total;
}

Cost TwoStrategyGame::deviation_cost(const TwoStrategyPlayer& p) const {
  Cost total = 0;
  for (ResourceId r : p.opt) {
    const std::uint64_t load = congestion_[r] + (has_resource(p.eq, r) ? 0 : 1);
    total = checked_add(total, delay(load, degree_));
  }
  return total;
}

CongestionVector TwoStrategyGame::eq_congestion() const {
  CongestionVector c(num_resources_, 0);
  for (const auto& [id, p] : players_) {
    for (ResourceId r : p.eq) ++c[r];
  }
  return c;
}

CongestionVector TwoStrategyGame::opt_congestion() const {
  CongestionVector c(num_resources_, 0);
  for (const auto& [id, p] : players_) {
    for (ResourceId r : p.opt) ++c[r];
  }
  return c;
}

std::uint32_t TwoStrategyGame::tracked_opt_bottleneck() const { return bottleneck(opt_congestion()); }

Game TwoStrategyGame::induced_game() const {
  std::vector<StrategySet> sets;
  sets.reserve(players_.size());
  for (const auto& [id, p] : players_) sets.push_back({p.eq, p.opt});
  return Game(num_resources_, degree_, std::move(sets));
}

bool TwoStrategyGame::induced_is_nash() const {
  if (players_.empty()) return true;
  const Game g = induced_game();
  return is_nash(g, Profile(g.num_players(), 0));
}

// ---------------------------------------------------------------------------
// PMS-Partition

std::vector<PartitionPair> pms_partition(std::span<const ResourceLoad> eq,
                                         std::span<const ResourceLoad> opt, int degree) {
  if (eq.empty() || opt.empty()) {
    throw PreconditionError("PMS-Partition needs nonempty equilibrium and optimal sets");
  }
  std::vector<ResourceLoad> eq_sorted(eq.begin(), eq.end());
  std::vector<ResourceLoad> opt_sorted(opt.begin(), opt.end());
  std::sort(eq_sorted.begin(), eq_sorted.end(), [](const ResourceLoad& a, const ResourceLoad& b) {
    return a.congestion != b.congestion ? a.congestion > b.congestion : a.id < b.id;
  });
  std::sort(opt_sorted.begin(), opt_sorted.end(), [](const ResourceLoad& a, const ResourceLoad& b) {
    return a.congestion != b.congestion ? a.congestion < b.congestion : a.id < b.id;
  });
  {
    std::set<ResourceId> seen;
    for (const ResourceLoad& l : eq_sorted) seen.insert(l.id);
    if (seen.size() != eq_sorted.size()) throw PreconditionError("equilibrium set repeats a resource");
    for (const ResourceLoad& l : opt_sorted) {
      if (!seen.insert(l.id).second) {
        throw PreconditionError("equilibrium and optimal sets share resource " + std::to_string(l.id));
      }
    }
  }

  std::vector<Cost> need;
  std::vector<Cost> cap;
  Cost need_total = 0;
  Cost cap_total = 0;
  for (const ResourceLoad& l : eq_sorted) {
    need.push_back(delay(l.congestion, degree));
    need_total = checked_add(need_total, need.back());
  }
  for (const ResourceLoad& l : opt_sorted) {
    cap.push_back(delay(static_cast<std::uint64_t>(l.congestion) + 1, degree));
    cap_total = checked_add(cap_total, cap.back());
  }
  if (cap_total < need_total) {
    throw PreconditionError("player is not in equilibrium: optimal set covers " + to_string(cap_total) +
                            " < equilibrium cost " + to_string(need_total));
  }

  PmsSearch search(need, cap);
  std::vector<PmsSearch::Step> steps;
  if (!search.solve(steps)) {
    throw StructuralError("PMS-Partition found no valid partition", "{}");
  }
  if (steps.back().eq_end - steps.back().eq_begin == 1) steps.back().opt_end = opt_sorted.size();

  std::vector<PartitionPair> pairs;
  pairs.reserve(steps.size());
  for (const PmsSearch::Step& s : steps) {
    PartitionPair pair;
    for (std::size_t i = s.eq_begin; i < s.eq_end; ++i) pair.eq_part.push_back(eq_sorted[i].id);
    for (std::size_t i = s.opt_begin; i < s.opt_end; ++i) pair.opt_part.push_back(opt_sorted[i].id);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<PartitionPair> pms_partition(const TwoStrategyGame& tsg, PlayerId player) {
  const TwoStrategyPlayer& p = tsg.player(player);
  const auto eq = loads(tsg, p.eq);
  const auto opt = loads(tsg, p.opt);
  return pms_partition(eq, opt, tsg.degree());
}

// ---------------------------------------------------------------------------
// Transformation steps

TwoStrategyGame init_two_strategy(const Game& game, const Profile& nash, const Profile& optimal) {
  game.validate_profile(nash);
  game.validate_profile(optimal);
  if (!is_nash(game, nash)) throw PreconditionError("profile is not a Nash equilibrium");
  const std::uint32_t c_star = bottleneck(congestion_of(game, optimal));
  std::vector<std::pair<Strategy, Strategy>> players;
  players.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    players.emplace_back(game.players()[i][nash[i]], game.players()[i][optimal[i]]);
  }
  return TwoStrategyGame(game.num_resources(), game.degree(), c_star, std::move(players));
}

void clean_game(TwoStrategyGame& tsg, const TransformOptions& options) {
  for (PlayerId id : tsg.player_ids()) {
    const TwoStrategyPlayer p = tsg.player(id);
    const Strategy shared = set_intersection(p.eq, p.opt);
    if (shared.empty()) continue;
    tsg.remove_player(id);
    std::vector<PlayerId> created;
    for (ResourceId r : shared) created.push_back(tsg.add_player({r}, {r}));
    Strategy eq_rest = set_difference(p.eq, shared);
    Strategy opt_rest = set_difference(p.opt, shared);
    // A player whose eq strategy lies inside its opt strategy leaves no
    // residual; its extra opt resources are redundant.
    if (!eq_rest.empty()) {
      if (opt_rest.empty()) structural("residual player has no optimal resources", tsg);
      created.push_back(tsg.add_player(std::move(eq_rest), std::move(opt_rest)));
    }
    emit(options, {{"op", "clean_split"}, {"player", id}, {"new_players", created}});
  }
  CongestionVector opt_load = tsg.opt_congestion();
  for (PlayerId id : tsg.player_ids()) prune_redundant(tsg, id, opt_load);
  check_invariants(tsg, options, "clean_game");
}

std::vector<PlayerId> partition_transform(TwoStrategyGame& tsg, PlayerId player,
                                          const TransformOptions& options) {
  const TwoStrategyPlayer old = tsg.player(player);
  if (old.kind() != PlayerKind::kTypeB) {
    throw PreconditionError("partition_transform expects a type-B player, got player " +
                            std::to_string(player));
  }
  const std::vector<PartitionPair> pairs = pms_partition(tsg, player);
  const Cost old_cost = tsg.eq_cost(old);
  std::uint32_t c_p = 0;
  for (ResourceId r : old.opt) c_p = std::max(c_p, tsg.congestion(r));
  const Cost type_b_ceiling = delay(static_cast<std::uint64_t>(c_p) + 1, tsg.degree());

  tsg.remove_player(player);
  std::vector<PlayerId> created;
  created.reserve(pairs.size());
  for (const PartitionPair& pair : pairs) {
    created.push_back(tsg.add_player(sorted(pair.eq_part), sorted(pair.opt_part)));
  }
  if (options.check_invariants) {
    for (PlayerId id : created) {
      const TwoStrategyPlayer& p = tsg.player(id);
      const Cost cost = tsg.eq_cost(p);
      if (cost > old_cost) structural("partition increased a player cost", tsg);
      if (p.kind() == PlayerKind::kTypeB && cost > type_b_ceiling) {
        structural("new type-B player exceeds (C_p+1)^M", tsg);
      }
    }
  }
  if (options.trace) {
    nlohmann::json pj = nlohmann::json::array();
    for (const PartitionPair& pair : pairs) pj.push_back(to_json(pair));
    emit(options, {{"op", "partition_transform"}, {"player", player}, {"pairs", pj},
                   {"new_players", created}});
  }
  check_invariants(tsg, options, "partition_transform");
  return created;
}

void eliminate_high_congestion(TwoStrategyGame& tsg, std::uint32_t phase_index, PlayerId player,
                               const TransformOptions& options) {
  if (tsg.player(player).opt.size() != 1) {
    throw PreconditionError("eliminate_high_congestion expects a single optimal resource");
  }
  for (;;) {
    TwoStrategyPlayer& p = tsg.player(player);
    if (p.opt.size() != 1 || tsg.congestion(p.opt.front()) <= phase_index) break;
    const ResourceId x = p.opt.front();

    // Type-A players on x that do not already keep x as their optimum,
    // largest optimal set first.
    std::vector<PlayerId> candidates;
    for (const auto& [id, q] : tsg.players()) {
      if (id != player && q.eq.size() == 1 && q.eq.front() == x && !has_resource(q.opt, x)) {
        candidates.push_back(id);
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](PlayerId a, PlayerId b) {
      return tsg.player(a).opt.size() > tsg.player(b).opt.size();
    });

    bool traded = false;
    for (PlayerId qid : candidates) {
      TwoStrategyPlayer& q = tsg.player(qid);
      // F: the least congested opt resource of q at or above the phase index,
      // otherwise all of q's opt strategy. Resources of p's own eq strategy
      // are excluded so p stays clean.
      std::optional<ResourceId> f_single;
      for (ResourceId r : q.opt) {
        if (tsg.congestion(r) < phase_index || has_resource(p.eq, r)) continue;
        if (!f_single || tsg.congestion(r) < tsg.congestion(*f_single)) f_single = r;
      }
      Strategy f = f_single ? Strategy{*f_single} : set_difference(q.opt, p.eq);
      if (f.empty()) continue;
      TwoStrategyPlayer trial = p;
      trial.opt = f;
      if (!tsg.in_equilibrium(trial)) continue;
      p.opt = std::move(f);
      q.opt = Strategy{x};
      emit(options, {{"op", "eliminate_high_congestion"}, {"player", player}, {"via", qid},
                     {"x", x}, {"new_opt", p.opt}});
      traded = true;
      break;
    }
    if (!traded) {
      structural("no type-A player on resource " + std::to_string(x) +
                     " can take over the optimal slot of player " + std::to_string(player),
                 tsg);
    }
    check_invariants(tsg, options, "eliminate_high_congestion");
  }
}

PhaseSummary run_phase(TwoStrategyGame& tsg, std::uint32_t phase_index,
                       const TransformOptions& options) {
  const std::uint32_t w = phase_index;
  const int m = tsg.degree();
  const Cost lower = delay(w, m);
  const Cost upper = delay(static_cast<std::uint64_t>(w) + 1, m);

  PhaseSummary summary;
  summary.phase_index = w;
  PhaseState state;
  state.phase_index = w;

  for (const auto& [id, p] : tsg.players()) {
    if (p.kind() == PlayerKind::kTypeB && tsg.eq_cost(p) > upper) {
      throw PreconditionError("type-B player " + std::to_string(id) + " costs more than (w+1)^M on entry to phase " +
                              std::to_string(w));
    }
  }

  // (a) Split every type-B player in the cost band (w^M, (w+1)^M].
  for (PlayerId id : tsg.player_ids()) {
    if (is_heavy_type_b(tsg, id, lower)) state.pi.push_back(id);
  }
  summary.pi_initial = state.pi.size();
  for (PlayerId id : state.pi) {
    partition_transform(tsg, id, options);
    ++summary.partition_calls;
  }

  // (b) What is left in the band has a single opt resource with C >= w.
  state.pi.clear();
  for (PlayerId id : tsg.player_ids()) {
    if (is_heavy_type_b(tsg, id, lower)) state.pi.push_back(id);
  }

  // (c) Move opt slots off resources congested above w.
  std::vector<PlayerId> qualified = state.pi;
  for (const auto& [id, p] : tsg.players()) {
    if (p.kind() == PlayerKind::kTypeA && p.opt.size() == 1 && tsg.eq_cost(p) == lower) {
      qualified.push_back(id);
    }
  }
  for (PlayerId id : qualified) {
    if (tsg.player(id).opt.size() == 1 && tsg.congestion(tsg.player(id).opt.front()) > w) {
      eliminate_high_congestion(tsg, w, id, options);
      ++summary.eliminations;
    }
  }

  // (d) Split into D and E; D players can be partitioned directly.
  for (PlayerId id : state.pi) {
    const TwoStrategyPlayer& p = tsg.player(id);
    if (p.opt.size() == 1 && tsg.congestion(p.opt.front()) == w) {
      state.e.push_back(id);
      continue;
    }
    std::uint32_t max_c = 0;
    Cost cover = 0;
    for (ResourceId r : p.opt) {
      max_c = std::max(max_c, tsg.congestion(r));
      cover = checked_add(cover, delay(static_cast<std::uint64_t>(tsg.congestion(r)) + 1, m));
    }
    if (p.opt.size() > 1 && max_c + 1 <= w && cover >= upper) {
      state.d.push_back(id);
    } else {
      structural("player " + std::to_string(id) + " fits neither D nor E in phase " + std::to_string(w), tsg);
    }
  }
  summary.d_size = state.d.size();
  summary.e_size = state.e.size();
  for (PlayerId id : state.d) {
    for (PlayerId child : partition_transform(tsg, id, options)) {
      if (is_heavy_type_b(tsg, child, lower)) structural("D-split left a type-B player above w^M", tsg);
    }
    ++summary.partition_calls;
  }

  // (e) Grow the opt sets of E players with opt sets borrowed from unmarked
  // type-A players on X, marking in round-robin order over R^A.
  std::map<ResourceId, std::size_t> type_a_count;
  for (ResourceId r = 0; r < tsg.num_resources(); ++r) {
    if (tsg.congestion(r) == w) state.x.push_back(r);
  }
  for (const auto& [id, p] : tsg.players()) {
    if (p.kind() == PlayerKind::kTypeA && tsg.congestion(p.eq.front()) == w) {
      ++type_a_count[p.eq.front()];
    }
  }
  for (ResourceId r : state.x) {
    if (type_a_count[r] > 0) state.r_a.push_back(r);
  }
  std::stable_sort(state.r_a.begin(), state.r_a.end(),
                   [&](ResourceId a, ResourceId b) { return type_a_count[a] < type_a_count[b]; });

  std::map<ResourceId, std::uint32_t> marks;
  std::deque<PlayerId> queue(state.e.begin(), state.e.end());
  bool first_e_call = true;
  while (!queue.empty()) {
    const PlayerId id = queue.front();
    queue.pop_front();
    if (tsg.player(id).opt.size() == 1 && tsg.congestion(tsg.player(id).opt.front()) > w) {
      eliminate_high_congestion(tsg, w, id, options);
      ++summary.eliminations;
    }
    const TwoStrategyPlayer& p = tsg.player(id);
    if (p.opt.size() > 1) {
      for (PlayerId child : partition_transform(tsg, id, options)) {
        if (is_heavy_type_b(tsg, child, lower)) queue.push_back(child);
      }
      ++summary.partition_calls;
      continue;
    }
    if (tsg.congestion(p.opt.front()) < w) {
      structural("E player " + std::to_string(id) + " has an optimal resource below the phase index", tsg);
    }

    std::optional<std::pair<PlayerId, std::size_t>> pick;
    const Strategy blocked = set_union(p.opt, p.eq);
    for (std::size_t k = 0; k < state.r_a.size() && !pick; ++k) {
      const std::size_t slot = (state.cursor + k) % state.r_a.size();
      const ResourceId r = state.r_a[slot];
      for (const auto& [qid, q] : tsg.players()) {
        if (!q.marked && q.eq.size() == 1 && q.eq.front() == r && disjoint(q.opt, blocked)) {
          pick = {qid, slot};
          break;
        }
      }
    }
    if (!pick) {
      structural("ran out of unmarked type-A players in phase " + std::to_string(w), tsg);
    }
    const auto [qid, slot] = *pick;
    state.cursor = slot + 1;
    const ResourceId r_m = state.r_a[slot];
    TwoStrategyPlayer& q = tsg.player(qid);
    TwoStrategyPlayer& target = tsg.player(id);
    target.opt = set_union(target.opt, q.opt);
    q.opt = Strategy{r_m};
    q.marked = true;
    ++summary.marks;
    summary.max_marks_on_resource = std::max(summary.max_marks_on_resource, ++marks[r_m]);
    emit(options, {{"op", "mark"}, {"player", id}, {"marked", qid}, {"resource", r_m},
                   {"new_opt", target.opt}});

    const std::vector<PlayerId> children = partition_transform(tsg, id, options);
    ++summary.partition_calls;
    std::size_t heavy = 0;
    for (PlayerId child : children) {
      if (is_heavy_type_b(tsg, child, lower)) {
        ++heavy;
        queue.push_back(child);
      }
    }
    summary.e_min_new_players =
        first_e_call ? children.size() : std::min(summary.e_min_new_players, children.size());
    summary.e_max_heavy_type_b = std::max(summary.e_max_heavy_type_b, heavy);
    first_e_call = false;
  }

  for (const auto& [id, p] : tsg.players()) {
    if (p.kind() == PlayerKind::kTypeB && tsg.eq_cost(p) > lower) {
      structural("type-B player " + std::to_string(id) + " still above w^M after phase " + std::to_string(w), tsg);
    }
  }
  emit(options, {{"op", "phase_done"}, {"summary", to_json(summary)}});
  return summary;
}

TransformResult transform_to_type_a(const Game& game, const Profile& nash, const Profile& optimal,
                                    const TransformOptions& options) {
  TransformResult result{init_two_strategy(game, nash, optimal), {}, 0, false};
  TwoStrategyGame& tsg = result.game;
  const CongestionVector input(tsg.congestion().begin(), tsg.congestion().end());
  check_invariants(tsg, options, "init_two_strategy");
  clean_game(tsg, options);

  const std::uint32_t c = tsg.c();
  const std::uint32_t psi = tsg.psi();
  result.noop = c <= psi;
  if (!result.noop) {
    const Cost ceiling = delay(static_cast<std::uint64_t>(c) + 1, tsg.degree());
    for (PlayerId id : tsg.player_ids()) {
      if (is_heavy_type_b(tsg, id, ceiling)) {
        partition_transform(tsg, id, options);
        ++result.preprocessing_calls;
      }
    }
    for (std::uint32_t w = c; w > psi; --w) result.phases.push_back(run_phase(tsg, w, options));
  }

  if (tsg.eq_congestion() != input) structural("equilibrium congestion vector changed", tsg);
  for (const auto& [id, p] : tsg.players()) {
    if (p.kind() != PlayerKind::kTypeB) continue;
    for (ResourceId r : p.eq) {
      if (tsg.congestion(r) > psi) {
        structural("type-B player " + std::to_string(id) + " remains on resource " + std::to_string(r), tsg);
      }
    }
  }
  if (!tsg.induced_is_nash()) structural("transformed game left equilibrium", tsg);
  return result;
}

DominationReport verify_domination(const Game& game, const Profile& nash, const Profile& optimal,
                                   const TwoStrategyGame& transformed) {
  DominationReport report;
  const CongestionVector original = congestion_of(game, nash);
  const CongestionVector recount = transformed.eq_congestion();
  report.c = bottleneck(original);
  report.c_transformed = bottleneck(recount);
  report.c_star = bottleneck(congestion_of(game, optimal));
  report.tracked_opt = transformed.tracked_opt_bottleneck();

  report.resources_ok = transformed.num_resources() <= game.num_resources();
  report.degree_ok = transformed.degree() == game.degree();
  report.congestion_equal = recount.size() == original.size() && recount == original;
  report.opt_lower_ok = report.c_star <= report.tracked_opt;
  report.opt_upper_ok = report.tracked_opt <= kDominationFactor * report.c_star;
  report.beta_observed = Rational(report.tracked_opt, std::max<std::uint32_t>(report.c_star, 1));

  if (!report.passed()) {
    std::string failed;
    if (!report.resources_ok) failed += " resources";
    if (!report.degree_ok) failed += " degree";
    if (!report.congestion_equal) failed += " congestion";
    if (!report.opt_lower_ok) failed += " opt-lower";
    if (!report.opt_upper_ok) failed += " opt-upper";
    throw DominationViolation("domination check failed:" + failed);
  }
  return report;
}

}  // namespace bcg
