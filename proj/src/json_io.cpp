#include "bcg/json_io.hpp"

#include <iterator>
#include <limits>

#include "bcg/errors.hpp"

namespace bcg {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::uint64_t unsigned_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ParseError(std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

Game game_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("game must be a JSON object");
  const std::uint64_t degree = unsigned_field(j, "degree");
  const std::uint64_t num_resources = unsigned_field(j, "num_resources");
  if (degree > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ParseError("field 'degree' out of range");
  }
  const json& players = field(j, "players");
  if (!players.is_array()) throw ParseError("field 'players' must be an array");

  std::vector<StrategySet> sets;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string where = "players[" + std::to_string(i) + "]";
    if (!players[i].is_array()) throw ParseError("field '" + where + "' must be an array");
    StrategySet set;
    for (std::size_t k = 0; k < players[i].size(); ++k) {
      const json& s = players[i][k];
      const std::string at = where + "[" + std::to_string(k) + "]";
      if (!s.is_array()) throw ParseError("field '" + at + "' must be an array of resource ids");
      Strategy strategy;
      for (const json& r : s) {
        if (!r.is_number_unsigned() && !(r.is_number_integer() && r.get<std::int64_t>() >= 0)) {
          throw ParseError("field '" + at + "' holds a non-integer resource id");
        }
        const std::uint64_t id = r.get<std::uint64_t>();
        if (id >= num_resources) {
          throw ParseError("field '" + at + "' names resource " + std::to_string(id) +
                           " >= num_resources");
        }
        strategy.push_back(static_cast<ResourceId>(id));
      }
      set.push_back(std::move(strategy));
    }
    sets.push_back(std::move(set));
  }
  try {
    return Game(num_resources, static_cast<int>(degree), std::move(sets));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

Game parse_game(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte));
  }
  return game_from_json(j);
}

Game parse_game(std::istream& in) {
  return parse_game(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
}

json to_json(const Game& game) {
  return {{"degree", game.degree()}, {"num_resources", game.num_resources()}, {"players", game.players()}};
}

json to_json(const Profile& profile) { return json(profile); }

json cost_to_json(Cost value) {
  if (value <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(value);
  return to_string(value);
}

json to_json(const PoaReport& report) {
  return {{"C", report.c},
          {"C_star", report.c_star},
          {"poa_num", report.poa.num()},
          {"poa_den", report.poa.den()},
          {"poa", report.poa.to_double()},
          {"nash_count", report.nash_count},
          {"worst_nash_choice", report.worst_nash},
          {"optimal_choice", report.optimal}};
}

json to_json(const TwoStrategyGame& tsg) {
  json players = json::array();
  for (const auto& [id, p] : tsg.players()) {
    players.push_back({{"id", id},
                       {"eq", p.eq},
                       {"opt", p.opt},
                       {"marked", p.marked},
                       {"type", p.kind() == PlayerKind::kTypeA ? "A" : "B"}});
  }
  return {{"num_resources", tsg.num_resources()},
          {"degree", tsg.degree()},
          {"c", tsg.c()},
          {"c_star", tsg.c_star()},
          {"psi", tsg.psi()},
          {"congestion", std::vector<std::uint32_t>(tsg.congestion().begin(), tsg.congestion().end())},
          {"players", players}};
}

json to_json(const PhaseSummary& s) {
  return {{"phase_index", s.phase_index},
          {"pi_initial", s.pi_initial},
          {"partition_calls", s.partition_calls},
          {"eliminations", s.eliminations},
          {"d_size", s.d_size},
          {"e_size", s.e_size},
          {"marks", s.marks},
          {"max_marks_on_resource", s.max_marks_on_resource},
          {"e_min_new_players", s.e_min_new_players},
          {"e_max_heavy_type_b", s.e_max_heavy_type_b}};
}

json to_json(const DominationReport& r) {
  return {{"passed", r.passed()},
          {"resources_ok", r.resources_ok},
          {"degree_ok", r.degree_ok},
          {"congestion_equal", r.congestion_equal},
          {"opt_lower_ok", r.opt_lower_ok},
          {"opt_upper_ok", r.opt_upper_ok},
          {"c", r.c},
          {"c_transformed", r.c_transformed},
          {"c_star", r.c_star},
          {"tracked_opt", r.tracked_opt},
          {"beta_observed", r.beta_observed.to_string()}};
}

json to_json(const PartitionPair& pair) { return {{"eq", pair.eq_part}, {"opt", pair.opt_part}}; }

}  // namespace bcg
