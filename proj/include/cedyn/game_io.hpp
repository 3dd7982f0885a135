// Copyright 2026 The ce-dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CEDYN_GAME_IO_HPP
#define CEDYN_GAME_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "cedyn/error.hpp"
#include "cedyn/game.hpp"
#include "json.hpp"

namespace cedyn {

// Game JSON:
//   {"players": m, "actions": [n_1, ..., n_m], "losses": [[...], ...]}
// losses[i] is flat row-major over (a_1, ..., a_m), a_1 slowest-varying.

inline nlohmann::json game_to_json(const Game& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  auto losses = nlohmann::json::array();
  for (std::size_t i = 0; i < game.num_players(); ++i)
    losses.push_back(game.losses(i));
  j["losses"] = std::move(losses);
  return j;
}

inline Game game_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("game must be a JSON object");
  for (const char* key : {"players", "actions", "losses"})
    if (!j.contains(key))
      throw ValidationError(std::string("game is missing field \"") + key + "\"");
  try {
    const auto players = j.at("players").get<std::size_t>();
    auto actions = j.at("actions").get<std::vector<std::size_t>>();
    auto losses = j.at("losses").get<std::vector<Vector>>();
    if (actions.size() != players)
      throw ValidationError("\"actions\" has " + std::to_string(actions.size()) +
                            " entries but \"players\" is " +
                            std::to_string(players));
    return Game(std::move(actions), std::move(losses));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid game field: ") + e.what());
  }
}

inline std::string save_game(const Game& game) {
  return game_to_json(game).dump() + "\n";
}

inline Game load_game(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed game JSON: ") + e.what(), e.byte);
  }
  return game_from_json(j);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("write failed for " + path.string());
}

inline Game load_game_file(const std::filesystem::path& path) {
  return load_game(read_file(path));
}

}  // namespace cedyn

#endif  // CEDYN_GAME_IO_HPP
