#pragma once

// Family of games whose price of anarchy equals |R|^(1/(M+1)) exactly.
//
// n players each choose between a shared resource e and a private path of
// n^M resources. Paths are pairwise disjoint and e is the first resource of
// player 0's path. Everyone on e is an equilibrium with bottleneck n; everyone
// on their path has bottleneck 1.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bcg/cost.hpp"
#include "bcg/equilibria.hpp"
#include "bcg/game.hpp"

namespace bcg {

inline constexpr std::uint64_t kDefaultResourceCap = 1'000'000;

struct LowerBoundInstance {
  std::uint32_t n = 0;
  int degree = 1;
  std::uint64_t path_len = 0;       // n^M
  std::uint64_t num_resources = 0;  // n^(M+1)
  Game game;
  Profile state_s;       // all players on e
  Profile state_s_star;  // all players on their paths
};

// Throws ValidationError for n < 2 or M < 1, and StateSpaceTooLarge when
// n^(M+1) exceeds `resource_cap`.
LowerBoundInstance generate_lower_bound(std::uint32_t n, int degree,
                                        std::uint64_t resource_cap = kDefaultResourceCap);

struct LowerBoundReport {
  bool s_is_nash = false;
  std::uint32_t c_s = 0;
  std::uint32_t c_s_star = 0;
  PoaReport poa;
  double root = 0;  // |R|^(1/(M+1))
  bool poa_equals_n = false;

  bool passed(std::uint32_t n) const {
    return s_is_nash && c_s == n && c_s_star == 1 && poa_equals_n;
  }
};

LowerBoundReport verify_lower_bound(const LowerBoundInstance& instance,
                                    std::uint64_t state_cap = kDefaultStateCap);

struct SweepRow {
  std::uint32_t n = 0;
  std::uint64_t num_resources = 0;
  Rational poa;
  double root = 0;
  double upper_bound = 0;  // upper_bound_arbitrary(|R|, M)
  bool verified = false;
};

std::vector<SweepRow> sweep_lower_bound(int degree, std::uint32_t n_from, std::uint32_t n_to,
                                        std::uint64_t state_cap = kDefaultStateCap);

// Least-squares slope of log PoA against log |R|. Needs two distinct |R|.
double loglog_slope(const std::vector<SweepRow>& rows);

}  // namespace bcg
