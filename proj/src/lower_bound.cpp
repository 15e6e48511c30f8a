#include "bcg/lower_bound.hpp"

#include <cmath>
#include <numeric>

#include "bcg/errors.hpp"
#include "bcg/expansion.hpp"

namespace bcg {

namespace {

Game build_game(std::uint32_t n, int degree, std::uint64_t path_len, std::uint64_t num_resources) {
  std::vector<StrategySet> players;
  players.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Strategy path(path_len);
    std::iota(path.begin(), path.end(), static_cast<ResourceId>(i * path_len));
    players.push_back({Strategy{0}, std::move(path)});
  }
  return Game(num_resources, degree, std::move(players));
}

}  // namespace

LowerBoundInstance generate_lower_bound(std::uint32_t n, int degree, std::uint64_t resource_cap) {
  if (n < 2) throw ValidationError("lower-bound family needs n >= 2");
  if (degree < 1) throw ValidationError("degree must be >= 1");
  const Cost path_len = checked_pow(n, degree);
  const Cost num_resources = checked_mul(path_len, n);
  if (num_resources > resource_cap) {
    throw StateSpaceTooLarge(std::to_string(n) + "^" + std::to_string(degree + 1) +
                             " resources exceed the cap of " + std::to_string(resource_cap));
  }
  const auto len = static_cast<std::uint64_t>(path_len);
  const auto total = static_cast<std::uint64_t>(num_resources);
  return LowerBoundInstance{n,
                            degree,
                            len,
                            total,
                            build_game(n, degree, len, total),
                            Profile(n, 0),
                            Profile(n, 1)};
}

LowerBoundReport verify_lower_bound(const LowerBoundInstance& instance, std::uint64_t state_cap) {
  LowerBoundReport report;
  const Game& game = instance.game;
  report.s_is_nash = is_nash(game, instance.state_s);
  report.c_s = bottleneck(congestion_of(game, instance.state_s));
  report.c_s_star = bottleneck(congestion_of(game, instance.state_s_star));
  report.poa = price_of_anarchy(game, state_cap);
  report.root = std::pow(static_cast<double>(instance.num_resources), 1.0 / (instance.degree + 1));
  report.poa_equals_n = report.poa.poa == Rational(instance.n, 1);
  return report;
}

std::vector<SweepRow> sweep_lower_bound(int degree, std::uint32_t n_from, std::uint32_t n_to,
                                        std::uint64_t state_cap) {
  if (n_from > n_to) throw ValidationError("empty n range");
  std::vector<SweepRow> rows;
  for (std::uint32_t n = n_from; n <= n_to; ++n) {
    const LowerBoundInstance inst = generate_lower_bound(n, degree);
    const LowerBoundReport rep = verify_lower_bound(inst, state_cap);
    rows.push_back({n, inst.num_resources, rep.poa.poa, rep.root,
                    upper_bound_arbitrary(inst.num_resources, degree), rep.passed(n)});
  }
  return rows;
}

double loglog_slope(const std::vector<SweepRow>& rows) {
  if (rows.size() < 2) throw ValidationError("slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const SweepRow& r : rows) {
    const double x = std::log(static_cast<double>(r.num_resources));
    const double y = std::log(r.poa.to_double());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(rows.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0) throw ValidationError("slope needs two distinct resource counts");
  return (k * sxy - sx * sy) / denom;
}

}  // namespace bcg
