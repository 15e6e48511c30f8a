#pragma once

#include <istream>
#include <string>

#include "json.hpp"

#include "bcg/equilibria.hpp"
#include "bcg/game.hpp"
#include "bcg/transform.hpp"

namespace bcg {

// Game file format:
//   {"degree": M, "num_resources": z, "players": [[[r, ...], ...], ...]}
// Each player entry is its list of strategies. Throws ParseError naming the
// offending field (or the byte offset for malformed JSON).
Game parse_game(const std::string& text);
Game parse_game(std::istream& in);
Game game_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Game& game);

nlohmann::json to_json(const Profile& profile);
nlohmann::json to_json(const PoaReport& report);
nlohmann::json to_json(const TwoStrategyGame& tsg);
nlohmann::json to_json(const PhaseSummary& summary);
nlohmann::json to_json(const DominationReport& report);
nlohmann::json to_json(const PartitionPair& pair);

// Costs can exceed 64 bits; small values are emitted as numbers and larger
// ones as decimal strings.
nlohmann::json cost_to_json(Cost value);

}  // namespace bcg
