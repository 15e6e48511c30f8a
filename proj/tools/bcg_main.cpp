// Command-line driver. Exit status: 0 when every requested check passes,
// 1 on a verification failure, 2 on usage or input errors.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bcg/equilibria.hpp"
#include "bcg/errors.hpp"
#include "bcg/expansion.hpp"
#include "bcg/json_io.hpp"
#include "bcg/lower_bound.hpp"
#include "bcg/suite.hpp"
#include "bcg/transform.hpp"

namespace {

using namespace bcg;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_cap() {
  const char* env = std::getenv("BCG_STATE_CAP");
  if (env == nullptr || *env == '\0') return kDefaultStateCap;
  try {
    std::size_t used = 0;
    const std::uint64_t cap = std::stoull(env, &used);
    if (used == std::string(env).size() && cap > 0) return cap;
  } catch (const std::exception&) {
  }
  throw ParseError(std::string("BCG_STATE_CAP must be a positive integer, got '") + env + "'");
}

Game load_game(const std::string& path) {
  if (path == "-") return parse_game(std::cin);
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_game(in);
}

int print(const json& j, bool ok) {
  std::cout << j.dump(2) << '\n';
  return ok ? kExitPass : kExitFail;
}

int cmd_analyze(const std::string& path, std::uint64_t cap) {
  const Game game = load_game(path);
  const PoaReport poa = price_of_anarchy(game, cap);
  const bool within = poa_within_upper_bound(poa.poa, game.num_resources(), game.degree());
  json out = to_json(poa);
  out["num_resources"] = game.num_resources();
  out["num_players"] = game.num_players();
  out["degree"] = game.degree();
  out["nash_equilibria"] = enumerate_nash(game, cap);
  out["upper_bound"] = upper_bound_arbitrary(game.num_resources(), game.degree());
  out["within_upper_bound"] = within;
  return print(out, within);
}

int cmd_suite(const RunConfig& config) {
  const SuiteReport report = run_suite(config);
  return print(to_json(report), report.passed());
}

int cmd_transform(const std::string& path, std::uint64_t cap, bool trace) {
  const Game game = load_game(path);
  const PoaReport poa = price_of_anarchy(game, cap);
  TransformOptions options;
  if (trace) options.trace = [](const std::string& line) { std::cerr << line << '\n'; };
  json out = {{"c", poa.c}, {"c_star", poa.c_star}, {"worst_nash", poa.worst_nash}, {"optimal", poa.optimal}};
  try {
    const TransformResult tr = transform_to_type_a(game, poa.worst_nash, poa.optimal, options);
    out["noop"] = tr.noop;
    out["psi"] = tr.game.psi();
    out["preprocessing_calls"] = tr.preprocessing_calls;
    json phases = json::array();
    for (const PhaseSummary& s : tr.phases) phases.push_back(to_json(s));
    out["phases"] = phases;
    out["domination"] = to_json(verify_domination(game, poa.worst_nash, poa.optimal, tr.game));
    out["game"] = to_json(tr.game);
    return print(out, true);
  } catch (const StructuralError& e) {
    out["error"] = e.what();
    out["state"] = json::parse(e.diagnostic(), nullptr, false);
    return print(out, false);
  } catch (const DominationViolation& e) {
    out["error"] = e.what();
    return print(out, false);
  }
}

int cmd_expansion(const std::string& path, std::uint64_t cap, bool transform) {
  const Game game = load_game(path);
  const PoaReport poa = price_of_anarchy(game, cap);
  ResourceGraph rg;
  if (transform) {
    rg = build_resource_graph(transform_to_type_a(game, poa.worst_nash, poa.optimal).game);
  } else {
    rg = build_resource_graph(game, poa.worst_nash, poa.optimal);
  }
  bool ok = true;
  json nodes = json::array();
  for (ResourceId x : rg.v1) {
    const ExpansionCheck c = check_expansion(rg, x);
    ok = ok && c.holds;
    nodes.push_back({{"node", x},
                     {"congestion", rg.congestion[x]},
                     {"lhs", cost_to_json(c.lhs)},
                     {"rhs", to_string(c.rhs_num) + "/" + to_string(c.rhs_den)},
                     {"holds", c.holds}});
  }
  json out = {{"psi", rg.psi},
              {"c_star", rg.c_star},
              {"v1", rg.v1},
              {"edges", rg.edge_count()},
              {"nodes", nodes},
              {"upper_bound_type_a", upper_bound_type_a(game.num_resources(), game.degree())},
              {"upper_bound_arbitrary", upper_bound_arbitrary(game.num_resources(), game.degree())},
              {"poa", poa.poa.to_string()}};
  if (!rg.v1.empty()) {
    ResourceId root = rg.v1.front();
    for (ResourceId x : rg.v1) {
      if (rg.congestion[x] > rg.congestion[root]) root = x;
    }
    const DescendantCheck dc = descendant_count_check(rg, root);
    const bool bounded = dc.v2_count + 1 <= game.num_resources();
    ok = ok && dc.holds && bounded;
    out["descendants"] = {{"root", root}, {"v2_count", dc.v2_count}, {"holds", dc.holds}, {"within_resources", bounded}};
  }
  const ExpansionDag dag = build_expansion_dag(rg);
  out["dag"] = {{"nodes", dag.nodes.size()}, {"edges", dag.edges.size()}, {"acyclic", dag.is_acyclic()}};
  out["passed"] = ok;
  return print(out, ok);
}

int cmd_lower_bound(std::uint32_t n, int degree, std::uint64_t cap) {
  const LowerBoundInstance inst = generate_lower_bound(n, degree);
  const LowerBoundReport r = verify_lower_bound(inst, cap);
  json out = {{"n", n},
              {"degree", degree},
              {"path_len", inst.path_len},
              {"num_resources", inst.num_resources},
              {"game", to_json(inst.game)},
              {"state_s", inst.state_s},
              {"state_s_star", inst.state_s_star},
              {"s_is_nash", r.s_is_nash},
              {"c_s", r.c_s},
              {"c_s_star", r.c_s_star},
              {"poa", r.poa.poa.to_string()},
              {"resources_root", r.root},
              {"poa_equals_n", r.poa_equals_n},
              {"passed", r.passed(n)}};
  return print(out, r.passed(n));
}

int cmd_sweep(int degree, const std::string& range, std::uint64_t cap) {
  const auto dots = range.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--n-range", "expected a..b");
  std::uint32_t lo = 0, hi = 0;
  try {
    lo = static_cast<std::uint32_t>(std::stoul(range.substr(0, dots)));
    hi = static_cast<std::uint32_t>(std::stoul(range.substr(dots + 2)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--n-range", "expected a..b");
  }
  const std::vector<SweepRow> rows = sweep_lower_bound(degree, lo, hi, cap);
  bool ok = true;
  std::cout << "n\tnum_resources\tpoa\tresources_root\tupper_bound\n";
  for (const SweepRow& r : rows) {
    ok = ok && r.verified;
    const std::string poa = r.poa.den() == 1 ? std::to_string(r.poa.num()) : r.poa.to_string();
    std::cout << r.n << '\t' << r.num_resources << '\t' << poa << '\t' << r.root << '\t' << r.upper_bound << '\n';
  }
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bottleneck congestion game toolkit"};
  app.require_subcommand(1);
  std::uint64_t cap = 0;
  app.add_option("--cap", cap, "State-space cap for exhaustive search (default: $BCG_STATE_CAP or 10^7)");

  std::string path;
  auto* analyze = app.add_subcommand("analyze", "Equilibria and exact price of anarchy of a game file");
  analyze->add_option("game", path, "Game JSON file, '-' for stdin")->required();

  RunConfig config;
  auto* suite = app.add_subcommand("suite", "Seeded random verification suite");
  suite->add_option("--count", config.count, "Random games")->capture_default_str();
  suite->add_option("--forced", config.forced_count, "Extra games with congestion above psi")->capture_default_str();
  suite->add_option("--seed", config.seed)->capture_default_str();
  suite->add_option("--max-players", config.max_players)->capture_default_str()->check(CLI::Range(2, 64));
  suite->add_option("--max-resources", config.max_resources)->capture_default_str()->check(CLI::Range(2, 1 << 20));
  suite->add_option("--max-strategies", config.max_strategies)->capture_default_str()->check(CLI::Range(2, 64));
  suite->add_option("--min-degree", config.min_degree)->capture_default_str()->check(CLI::Range(1, 16));
  suite->add_option("--max-degree", config.max_degree)->capture_default_str()->check(CLI::Range(1, 16));
  suite->add_option("--starts", config.brd_starts, "Best-response starts per game")->capture_default_str();

  bool trace = false;
  auto* transform = app.add_subcommand("transform", "Rewrite the worst equilibrium into a type-A game");
  transform->add_option("game", path)->required();
  transform->add_flag("--trace", trace, "Write one JSON line per operation to stderr");

  bool via_transform = false;
  auto* expansion = app.add_subcommand("expansion", "Expansion checks on the worst equilibrium");
  expansion->add_option("game", path)->required();
  expansion->add_flag("--transform", via_transform, "Transform to a type-A game first");

  std::uint32_t n = 0;
  int degree = 1;
  auto* lower = app.add_subcommand("lower-bound", "Generate and verify a lower-bound instance");
  lower->add_option("--n", n)->required()->check(CLI::Range(2, 1 << 16));
  lower->add_option("--degree", degree)->required()->check(CLI::Range(1, 16));

  std::string range;
  auto* sweep = app.add_subcommand("sweep", "Lower-bound family over a range of n, as TSV");
  sweep->add_option("--degree", degree)->required()->check(CLI::Range(1, 16));
  sweep->add_option("--n-range", range, "a..b")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (cap == 0) cap = default_cap();
    config.state_cap = cap;
    if (*analyze) return cmd_analyze(path, cap);
    if (*suite) {
      if (config.max_degree < config.min_degree) throw CLI::ValidationError("--max-degree", "below --min-degree");
      return cmd_suite(config);
    }
    if (*transform) return cmd_transform(path, cap, trace);
    if (*expansion) return cmd_expansion(path, cap, via_transform);
    if (*lower) return cmd_lower_bound(n, degree, cap);
    if (*sweep) return cmd_sweep(degree, range, cap);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StateSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
