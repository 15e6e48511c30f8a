#include "bcg/suite.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "bcg/errors.hpp"
#include "bcg/expansion.hpp"
#include "bcg/json_io.hpp"
#include "bcg/transform.hpp"

namespace bcg {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::uint32_t psi_for(int degree, std::uint32_t c_star) {
  return std::max<std::uint32_t>(2 * static_cast<std::uint32_t>(degree), 3 * c_star);
}

Game draw_forced(std::mt19937_64& rng) {
  static constexpr int kDegrees[] = {1, 1, 2};
  const int m = kDegrees[uniform(rng, 0, 2)];
  const std::size_t n = m == 1 ? uniform(rng, 4, 7) : uniform(rng, 5, 7);
  const std::size_t sides = uniform(rng, 1, 3);
  auto side = [&] { return static_cast<ResourceId>(1 + uniform(rng, 0, sides - 1)); };

  std::size_t next = 1 + sides;
  std::vector<StrategySet> players;
  for (std::size_t i = 0; i < n; ++i) {
    StrategySet set;
    set.push_back(chance(rng, 0.5) ? Strategy{0} : Strategy{0, side()});
    const std::size_t base = static_cast<std::size_t>(delay(n, m));
    const std::size_t len = base + uniform(rng, 0, base / 2 + 2);
    std::vector<ResourceId> path(len);
    for (std::size_t k = 0; k < len; ++k) path[k] = static_cast<ResourceId>(next + k);
    next += len;
    if (chance(rng, 0.3)) path.back() = side();
    set.push_back(path);
    if (chance(rng, 0.4)) {
      std::vector<ResourceId> alt(path.begin(), path.begin() + std::max<std::size_t>(1, len / 2));
      alt.push_back(side());
      set.push_back(alt);
    }
    for (Strategy& s : set) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    StrategySet unique;
    for (Strategy& s : set) {
      if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(std::move(s));
    }
    players.push_back(std::move(unique));
  }
  return Game(next, m, std::move(players));
}

}  // namespace

std::mt19937_64 game_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Game random_game(std::mt19937_64& rng, const RunConfig& config) {
  if (config.max_players < 2 || config.max_resources < 2 || config.max_strategies < 2) {
    throw ValidationError("random games need at least 2 players, resources and strategies");
  }
  if (config.min_degree < 1 || config.max_degree < config.min_degree) {
    throw ValidationError("invalid degree range");
  }
  const int degree = static_cast<int>(uniform(rng, config.min_degree, config.max_degree));
  const std::size_t players = uniform(rng, 2, config.max_players);
  const std::size_t resources = uniform(rng, 2, config.max_resources);
  std::vector<ResourceId> pool(resources);
  for (std::size_t r = 0; r < resources; ++r) pool[r] = static_cast<ResourceId>(r);

  std::vector<StrategySet> sets(players);
  for (StrategySet& set : sets) {
    const std::size_t k = uniform(rng, 2, config.max_strategies);
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t size = uniform(rng, 1, std::min<std::size_t>(3, resources));
      std::vector<ResourceId> pick;
      std::sample(pool.begin(), pool.end(), std::back_inserter(pick), size, rng);
      set.push_back(std::move(pick));
    }
  }
  return Game(resources, degree, std::move(sets));
}

ForcedGame forced_congestion_game(std::mt19937_64& rng, std::uint64_t state_cap) {
  for (;;) {
    Game game = draw_forced(rng);
    PoaReport poa = price_of_anarchy(game, state_cap);
    if (poa.c > psi_for(game.degree(), poa.c_star)) return ForcedGame{std::move(game), std::move(poa)};
  }
}

BrdCheck check_best_response(const Game& game, const Profile& start) {
  BrdCheck check;
  check.start_potential = rosenthal_potential(game, start);
  check.exact_descent = true;
  Profile current = start;
  Cost potential = check.start_potential;
  const std::size_t limit = check.start_potential > 1'000'000'000
                                ? 1'000'000'000
                                : static_cast<std::size_t>(check.start_potential);
  try {
    const EquilibriumReport report = best_response_dynamics(game, start, limit, [&](const MoveRecord& m) {
      current[m.player] = m.to;
      const Cost next = rosenthal_potential(game, current);
      if (!(next < potential) || potential - next != m.cost_before - m.cost_after) check.exact_descent = false;
      potential = next;
    });
    check.converged = true;
    check.ended_in_nash = report.is_nash;
    check.moves = report.moves;
    check.moves_within_potential = report.moves <= check.start_potential;
  } catch (const NonConvergence&) {
    check.converged = false;
  }
  return check;
}

SuiteRecord analyze_game(const Game& game, std::mt19937_64& rng, const RunConfig& config) {
  SuiteRecord rec;
  rec.num_resources = game.num_resources();
  rec.num_players = game.num_players();
  rec.degree = game.degree();
  try {
    const PoaReport poa = price_of_anarchy(game, config.state_cap);
    rec.c = poa.c;
    rec.c_star = poa.c_star;
    rec.poa = poa.poa.to_string();
    rec.nash_count = poa.nash_count;
    rec.bound = upper_bound_arbitrary(game.num_resources(), game.degree());
    rec.bound_ok = poa_within_upper_bound(poa.poa, game.num_resources(), game.degree());
    if (!rec.bound_ok) rec.error = "price of anarchy above the upper bound";

    rec.brd_ok = true;
    for (std::size_t s = 0; s < config.brd_starts; ++s) {
      Profile start(game.num_players());
      for (std::size_t i = 0; i < start.size(); ++i) start[i] = uniform(rng, 0, game.strategies(i).size() - 1);
      if (!check_best_response(game, start).passed()) {
        rec.brd_ok = false;
        if (rec.error.empty()) rec.error = "best-response dynamics check failed";
      }
    }

    const TransformResult tr = transform_to_type_a(game, poa.worst_nash, poa.optimal);
    const DominationReport dom = verify_domination(game, poa.worst_nash, poa.optimal, tr.game);
    rec.transform_ok = true;
    rec.transform_noop = tr.noop;
    rec.beta_observed = dom.beta_observed.to_string();

    const ResourceGraph rg = build_resource_graph(tr.game);
    rec.v1_nodes = rg.v1.size();
    rec.expansion_ok = true;
    for (ResourceId x : rg.v1) {
      if (!check_expansion(rg, x).holds) {
        rec.expansion_ok = false;
        if (rec.error.empty()) rec.error = "expansion inequality fails at resource " + std::to_string(x);
      }
    }
    if (!rg.v1.empty()) {
      const ResourceId root = *std::max_element(rg.v1.begin(), rg.v1.end(), [&](ResourceId a, ResourceId b) {
        return rg.congestion[a] < rg.congestion[b];
      });
      const DescendantCheck dc = descendant_count_check(rg, root);
      if (!dc.holds || dc.v2_count + 1 > game.num_resources()) {
        rec.expansion_ok = false;
        if (rec.error.empty()) rec.error = "descendant count check fails at resource " + std::to_string(root);
      }
    }
  } catch (const Error& e) {
    if (rec.error.empty()) rec.error = e.what();
  }
  return rec;
}

bool SuiteReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const SuiteRecord& r) { return r.passed(); });
}

SuiteReport run_suite(const RunConfig& config) {
  SuiteReport report;
  report.seed = config.seed;
  const std::size_t total = config.count + config.forced_count;
  report.records.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      std::mt19937_64 rng = game_rng(config.seed, i);
      const bool forced = i >= config.count;
      SuiteRecord rec;
      try {
        const Game game = forced ? forced_congestion_game(rng, config.state_cap).game : random_game(rng, config);
        rec = analyze_game(game, rng, config);
      } catch (const Error& e) {
        rec.error = e.what();
      }
      rec.index = i;
      rec.forced = forced;
      report.records[i] = std::move(rec);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, std::max<std::size_t>(total, 1)); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return report;
}

nlohmann::json to_json(const SuiteRecord& r) {
  nlohmann::json j = {{"index", r.index},
                      {"forced", r.forced},
                      {"num_resources", r.num_resources},
                      {"num_players", r.num_players},
                      {"degree", r.degree},
                      {"c", r.c},
                      {"c_star", r.c_star},
                      {"poa", r.poa},
                      {"bound", r.bound},
                      {"nash_count", r.nash_count},
                      {"bound_ok", r.bound_ok},
                      {"brd_ok", r.brd_ok},
                      {"transform_ok", r.transform_ok},
                      {"transform_noop", r.transform_noop},
                      {"beta_observed", r.beta_observed},
                      {"expansion_ok", r.expansion_ok},
                      {"v1_nodes", r.v1_nodes},
                      {"passed", r.passed()}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const SuiteRecord& r : report.records) records.push_back(to_json(r));
  return {{"seed", report.seed}, {"passed", report.passed()}, {"count", report.records.size()}, {"records", records}};
}

}  // namespace bcg
