#pragma once

// Resource graph of a type-A equilibrium and the counting checks built on it.
//
// Nodes are resources. Resources with equilibrium congestion above psi form
// V1; the rest form V2 and have no outgoing edges. Every type-A player on a
// V1 resource x contributes one edge x -> y for each resource y != x of its
// optimal strategy.

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bcg/cost.hpp"
#include "bcg/game.hpp"
#include "bcg/transform.hpp"

namespace bcg {

struct ResourceGraph {
  int degree = 1;
  std::uint32_t psi = 0;
  std::uint32_t c_star = 0;
  CongestionVector congestion;
  std::vector<ResourceId> v1;  // sorted
  std::vector<ResourceId> v2;  // sorted
  // Child multiplicities per V1 node: children[x][y] = number of x -> y edges.
  std::map<ResourceId, std::map<ResourceId, std::uint32_t>> children;

  bool in_v1(ResourceId r) const { return congestion.at(r) > psi; }
  std::size_t num_resources() const { return congestion.size(); }
  std::size_t edge_count() const;
};

// From a transformed workspace. psi is taken from the workspace and C* is the
// bottleneck of its tracked optimal strategies. Throws PreconditionError if a
// type-B player uses a V1 resource.
ResourceGraph build_resource_graph(const TwoStrategyGame& tsg);

// From a game with a Nash profile and an optimal profile; C* is the optimal
// bottleneck and psi = max(2M, 3C*).
ResourceGraph build_resource_graph(const Game& game, const Profile& nash, const Profile& optimal);

struct ExpansionCheck {
  ResourceId node = 0;
  Cost lhs = 0;
  // rhs = rhs_num / rhs_den = (C_x - C*) C_x^M / (2 C*); rhs_num is 0 when
  // C_x <= C*.
  Cost rhs_num = 0;
  Cost rhs_den = 1;
  bool holds = false;
};

// Children are weighted by C_y^M (V1) or psi^M (V2), each distinct child
// counted at most C* times. Throws PreconditionError if x is not in V1.
ExpansionCheck check_expansion(const ResourceGraph& rg, ResourceId x);

struct DescendantCheck {
  ResourceId root = 0;
  std::size_t v2_count = 0;  // distinct V2 resources reachable from root
  bool holds = false;        // v2_count * C* * psi^M >= (C - C*) C^M / (2 C*)
};

DescendantCheck descendant_count_check(const ResourceGraph& rg, ResourceId root);

// Strongly connected components of the graph collapsed to single nodes.
struct ExpansionDag {
  std::vector<std::vector<ResourceId>> nodes;        // component members, sorted
  std::vector<std::size_t> component_of;             // per resource
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // deduplicated, sorted

  bool is_acyclic() const;
};

ExpansionDag build_expansion_dag(const ResourceGraph& rg);

// max(2, (4 * 3^M * (R - 1))^(1 / (M + 1))).
double upper_bound_type_a(std::size_t num_resources, int degree);
// 7 times upper_bound_type_a.
double upper_bound_arbitrary(std::size_t num_resources, int degree);

// Exact test of poa <= upper_bound_arbitrary(num_resources, degree).
bool poa_within_upper_bound(const Rational& poa, std::size_t num_resources, int degree);

}  // namespace bcg
