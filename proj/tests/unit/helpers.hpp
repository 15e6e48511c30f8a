#pragma once

// Small builders and brute-force oracles shared by the unit tests.

#include <random>
#include <vector>

#include "bcg/game.hpp"

namespace bcg::testing {

// Congestion by scanning every player for every resource.
inline std::vector<std::uint32_t> recount(const Game& g, const Profile& p) {
  std::vector<std::uint32_t> c(g.num_resources(), 0);
  for (ResourceId r = 0; r < g.num_resources(); ++r) {
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      for (ResourceId s : g.strategy(i, p[i])) c[r] += s == r ? 1 : 0;
    }
  }
  return c;
}

inline unsigned long long ipow(unsigned long long b, int e) {
  unsigned long long v = 1;
  while (e-- > 0) v *= b;
  return v;
}

// Cost of player i after a unilateral switch to strategy k, from scratch.
inline unsigned long long switched_cost(const Game& g, Profile p, std::size_t i, std::size_t k) {
  p[i] = k;
  const auto c = recount(g, p);
  unsigned long long total = 0;
  for (ResourceId r : g.strategy(i, k)) total += ipow(c[r], g.degree());
  return total;
}

inline bool brute_nash(const Game& g, const Profile& p) {
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    const unsigned long long current = switched_cost(g, p, i, p[i]);
    for (std::size_t k = 0; k < g.strategies(i).size(); ++k) {
      if (switched_cost(g, p, i, k) < current) return false;
    }
  }
  return true;
}

inline std::vector<Profile> all_profiles(const Game& g) {
  std::vector<Profile> out{Profile(g.num_players(), 0)};
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    std::vector<Profile> next;
    for (const Profile& p : out) {
      for (std::size_t k = 0; k < g.strategies(i).size(); ++k) {
        Profile q = p;
        q[i] = k;
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace bcg::testing
