#include "bcg/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "bcg/errors.hpp"

namespace bcg {

namespace {

struct Occupant {
  const Strategy* eq;
  const Strategy* opt;
};

ResourceGraph build(std::size_t num_resources, int degree, std::uint32_t psi, std::uint32_t c_star,
                    CongestionVector congestion, const std::vector<Occupant>& occupants) {
  ResourceGraph rg;
  rg.degree = degree;
  rg.psi = psi;
  rg.c_star = c_star;
  rg.congestion = std::move(congestion);
  for (ResourceId r = 0; r < num_resources; ++r) (rg.in_v1(r) ? rg.v1 : rg.v2).push_back(r);
  for (ResourceId x : rg.v1) rg.children[x];
  for (std::size_t i = 0; i < occupants.size(); ++i) {
    const Strategy& eq = *occupants[i].eq;
    if (eq.size() > 1) {
      for (ResourceId r : eq) {
        if (rg.in_v1(r)) {
          throw PreconditionError("player " + std::to_string(i) + " uses high-congestion resource " +
                                  std::to_string(r) + " with a multi-resource strategy");
        }
      }
      continue;
    }
    const ResourceId x = eq.front();
    if (!rg.in_v1(x)) continue;
    for (ResourceId y : *occupants[i].opt) {
      if (y != x) ++rg.children[x][y];
    }
  }
  return rg;
}

// 2 C* a >= (C - C*) C^M, i.e. a >= (C - C*) C^M / (2 C*).
bool covers(Cost a, std::uint32_t c, std::uint32_t c_star, int degree, Cost* rhs_num = nullptr) {
  const Cost num = c > c_star ? checked_mul(c - c_star, delay(c, degree)) : 0;
  if (rhs_num) *rhs_num = num;
  return checked_mul(checked_mul(2, c_star), a) >= num;
}

}  // namespace

std::size_t ResourceGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [x, ch] : children) {
    for (const auto& [y, mult] : ch) n += mult;
  }
  return n;
}

ResourceGraph build_resource_graph(const TwoStrategyGame& tsg) {
  std::vector<Occupant> occupants;
  for (const auto& [id, p] : tsg.players()) occupants.push_back({&p.eq, &p.opt});
  return build(tsg.num_resources(), tsg.degree(), tsg.psi(), tsg.tracked_opt_bottleneck(),
               CongestionVector(tsg.congestion().begin(), tsg.congestion().end()), occupants);
}

ResourceGraph build_resource_graph(const Game& game, const Profile& nash, const Profile& optimal) {
  game.validate_profile(nash);
  game.validate_profile(optimal);
  const std::uint32_t c_star = bottleneck(congestion_of(game, optimal));
  const std::uint32_t psi = std::max<std::uint32_t>(2 * static_cast<std::uint32_t>(game.degree()), 3 * c_star);
  std::vector<Occupant> occupants;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    occupants.push_back({&game.strategy(i, nash[i]), &game.strategy(i, optimal[i])});
  }
  return build(game.num_resources(), game.degree(), psi, c_star, congestion_of(game, nash), occupants);
}

ExpansionCheck check_expansion(const ResourceGraph& rg, ResourceId x) {
  if (x >= rg.num_resources() || !rg.in_v1(x)) {
    throw PreconditionError("resource " + std::to_string(x) + " is not a high-congestion node");
  }
  ExpansionCheck out;
  out.node = x;
  const Cost psi_weight = delay(rg.psi, rg.degree);
  auto it = rg.children.find(x);
  if (it != rg.children.end()) {
    for (const auto& [y, mult] : it->second) {
      const Cost weight = rg.in_v1(y) ? delay(rg.congestion[y], rg.degree) : psi_weight;
      out.lhs = checked_add(out.lhs, checked_mul(std::min(mult, rg.c_star), weight));
    }
  }
  out.rhs_den = 2 * static_cast<Cost>(rg.c_star);
  out.holds = covers(out.lhs, rg.congestion[x], rg.c_star, rg.degree, &out.rhs_num);
  return out;
}

DescendantCheck descendant_count_check(const ResourceGraph& rg, ResourceId root) {
  if (root >= rg.num_resources() || !rg.in_v1(root)) {
    throw PreconditionError("root " + std::to_string(root) + " is not a high-congestion node");
  }
  std::set<ResourceId> seen{root};
  std::deque<ResourceId> queue{root};
  DescendantCheck out;
  out.root = root;
  while (!queue.empty()) {
    const ResourceId x = queue.front();
    queue.pop_front();
    auto it = rg.children.find(x);
    if (it == rg.children.end()) continue;
    for (const auto& [y, mult] : it->second) {
      if (!seen.insert(y).second) continue;
      if (rg.in_v1(y)) {
        queue.push_back(y);
      } else {
        ++out.v2_count;
      }
    }
  }
  const Cost reached = checked_mul(checked_mul(out.v2_count, rg.c_star), delay(rg.psi, rg.degree));
  out.holds = covers(reached, rg.congestion[root], rg.c_star, rg.degree);
  return out;
}

bool ExpansionDag::is_acyclic() const {
  std::vector<std::size_t> indegree(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (const auto& [a, b] : edges) {
    if (a == b) return false;
    out[a].push_back(b);
    ++indegree[b];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return visited == nodes.size();
}

ExpansionDag build_expansion_dag(const ResourceGraph& rg) {
  const std::size_t n = rg.num_resources();
  std::vector<std::vector<ResourceId>> adj(n);
  for (const auto& [x, ch] : rg.children) {
    for (const auto& [y, mult] : ch) adj[x].push_back(y);
  }

  // Iterative Tarjan.
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<ResourceId> stack;
  std::vector<std::vector<ResourceId>> components;
  std::size_t counter = 0;
  for (ResourceId start = 0; start < n; ++start) {
    if (index[start] != kUnvisited) continue;
    std::vector<std::pair<ResourceId, std::size_t>> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < adj[v].size()) {
        const ResourceId w = adj[v][next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const ResourceId done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<ResourceId> members;
        ResourceId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components.size();
          members.push_back(w);
        } while (w != done);
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
      }
    }
  }

  ExpansionDag dag;
  dag.nodes = std::move(components);
  dag.component_of = std::move(comp);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (ResourceId x = 0; x < n; ++x) {
    for (ResourceId y : adj[x]) {
      if (dag.component_of[x] != dag.component_of[y]) edges.insert({dag.component_of[x], dag.component_of[y]});
    }
  }
  dag.edges.assign(edges.begin(), edges.end());
  return dag;
}

double upper_bound_type_a(std::size_t num_resources, int degree) {
  if (num_resources < 1 || degree < 1) throw ValidationError("bound needs |R| >= 1 and M >= 1");
  const double k = 4.0 * std::pow(3.0, degree) * static_cast<double>(num_resources - 1);
  return std::max(2.0, std::pow(k, 1.0 / (degree + 1)));
}

double upper_bound_arbitrary(std::size_t num_resources, int degree) {
  return 7.0 * upper_bound_type_a(num_resources, degree);
}

bool poa_within_upper_bound(const Rational& poa, std::size_t num_resources, int degree) {
  if (num_resources < 1 || degree < 1) throw ValidationError("bound needs |R| >= 1 and M >= 1");
  const Cost p = poa.num();
  const Cost q = poa.den();
  // p/q <= 7 max(2, K^(1/(M+1))) with K = 4 3^M (R-1).
  if (p <= checked_mul(14, q)) return true;
  const Cost k = checked_mul(checked_mul(4, checked_pow(3, degree)), num_resources - 1);
  return checked_pow(p, degree + 1) <= checked_mul(k, checked_pow(checked_mul(7, q), degree + 1));
}

}  // namespace bcg
