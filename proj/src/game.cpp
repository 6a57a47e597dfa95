#include "iga/game.hpp"

#include <fstream>

namespace iga {

namespace {

double finite_entry(const nlohmann::json& m, int i, int j, const char* name) {
  const auto& cell = m.at(i).at(j);
  if (!cell.is_number()) {
    throw std::invalid_argument(std::string("game matrix '") + name +
                                "' entry is not a number");
  }
  double v = cell.get<double>();
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("game matrix '") + name +
                                "' entry is not finite");
  }
  return v;
}

void check_matrix(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) {
    throw std::invalid_argument(std::string("game file is missing matrix '") +
                                name + "'");
  }
  const auto& m = j.at(name);
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
      !m[1].is_array() || m[1].size() != 2) {
    throw std::invalid_argument(std::string("game matrix '") + name +
                                "' must be a 2x2 array");
  }
}

}  // namespace

Game game_from_json(const nlohmann::json& j) {
  check_matrix(j, "r");
  check_matrix(j, "c");
  const auto& r = j.at("r");
  const auto& c = j.at("c");
  return Game{finite_entry(r, 0, 0, "r"), finite_entry(r, 0, 1, "r"),
              finite_entry(r, 1, 0, "r"), finite_entry(r, 1, 1, "r"),
              finite_entry(c, 0, 0, "c"), finite_entry(c, 0, 1, "c"),
              finite_entry(c, 1, 0, "c"), finite_entry(c, 1, 1, "c")};
}

nlohmann::json game_to_json(const Game& g) {
  nlohmann::json j;
  j["r"] = {{g.r11, g.r12}, {g.r21, g.r22}};
  j["c"] = {{g.c11, g.c12}, {g.c21, g.c22}};
  return j;
}

Game load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open game file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("game file '" + path +
                                "' is not valid JSON: " + e.what());
  }
  return game_from_json(j);
}

}  // namespace iga
