#ifndef CONTACTLOC_SCENARIO_HPP
#define CONTACTLOC_SCENARIO_HPP

// Scenario documents: one JSON file per problem family.
//
//   {
//     "name": "w1",                                   (optional)
//     "grid": {"width": 10, "height": 1, "static_obstacles": [{"x":..,"y":..}]},
//     "object": {"offsets": [{"x": 0, "y": 0}]},
//     "robot_start": {"x": 0, "y": 0},
//     "actions": [{"kind": "move", "direction": "+x"},
//                 {"kind": "guarded", "direction": "-y", "max_steps": 9}],
//     "uncertainty_sets": [[{"x": 5, "y": 0, "rot": 0}, ...], ...],
//     "groundtruth": {"x": 5, "y": 0, "rot": 0}        (optional)
//   }

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "contactloc/belief.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/rtdp.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

struct Scenario {
    std::string name = "scenario";
    Domain domain;
    Cell robot_start;
    std::vector<std::vector<Hypothesis>> uncertainty_sets;
    std::optional<Hypothesis> groundtruth;

    /// `set000`, `set001`, ... in document order.
    static std::string set_id(std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "set%03zu", i);
        return buf;
    }

    std::optional<std::size_t> find_set(const std::string& id_or_index) const {
        for (std::size_t i = 0; i < uncertainty_sets.size(); ++i)
            if (set_id(i) == id_or_index || std::to_string(i) == id_or_index) return i;
        return std::nullopt;
    }

    BeliefState start_belief(std::size_t set) const {
        return BeliefState(robot_start, uncertainty_sets.at(set));
    }

    Problem problem(std::size_t set) const { return {set_id(set), domain, start_belief(set)}; }
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing key");
    return *it;
}

inline int require_int(const nlohmann::json& j, const char* key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v.get<int>();
}

inline const nlohmann::json& require_array(const nlohmann::json& j, const char* key,
                                           const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_array()) throw ConfigError(path + "." + key, "expected an array");
    return v;
}

inline Cell cell_from_json(const nlohmann::json& j, const std::string& path) {
    return {require_int(j, "x", path), require_int(j, "y", path)};
}

inline Hypothesis pose_from_json(const nlohmann::json& j, const std::string& path) {
    const int deg = require_int(j, "rot", path);
    const auto rot = rotation_from_degrees(deg);
    if (!rot) throw ConfigError(path + ".rot", "rotation must be 0, 90, 180 or 270");
    return {require_int(j, "x", path), require_int(j, "y", path), *rot};
}

inline Action action_from_json(const nlohmann::json& j, const std::string& path) {
    const auto& kind = require(j, "kind", path);
    const auto& dir = require(j, "direction", path);
    if (!kind.is_string()) throw ConfigError(path + ".kind", "expected a string");
    if (!dir.is_string()) throw ConfigError(path + ".direction", "expected a string");
    const auto d = parse_direction(dir.get<std::string>());
    if (!d) throw ConfigError(path + ".direction", "expected one of +x, -x, +y, -y");
    const auto k = kind.get<std::string>();
    if (k == "move") {
        if (j.contains("max_steps") && require_int(j, "max_steps", path) != 1)
            throw ConfigError(path + ".max_steps", "move actions take exactly one step");
        return Action::move(*d);
    }
    if (k == "guarded") {
        const int steps = require_int(j, "max_steps", path);
        if (steps < 1) throw ConfigError(path + ".max_steps", "must be >= 1");
        return Action::guarded(*d, steps);
    }
    throw ConfigError(path + ".kind", "expected 'move' or 'guarded'");
}

inline void check_pose(const GridWorld& grid, const ObjectModel& model, const Hypothesis& h,
                       const std::string& path) {
    for (const Cell& c : model.cells(h)) {
        if (!grid.contains(c)) throw ConfigError(path, "pose out of bounds");
        if (grid.is_obstacle(c)) throw ConfigError(path, "pose overlaps a static obstacle");
    }
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario load_world(const nlohmann::json& doc) {
    using namespace detail;
    const std::string root = "$";
    if (!doc.is_object()) throw ConfigError(root, "expected an object");

    const auto& g = require(doc, "grid", root);
    const int width = require_int(g, "width", "$.grid");
    const int height = require_int(g, "height", "$.grid");
    if (width < 1 || height < 1) throw ConfigError("$.grid", "width and height must be >= 1");
    std::vector<Cell> obstacles;
    if (g.contains("static_obstacles")) {
        const auto& arr = require_array(g, "static_obstacles", "$.grid");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "$.grid.static_obstacles[" + std::to_string(i) + "]";
            const Cell c = cell_from_json(arr[i], p);
            if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height)
                throw ConfigError(p, "obstacle out of bounds");
            obstacles.push_back(c);
        }
    }
    GridWorld grid(width, height, std::move(obstacles));

    const auto& offs = require_array(require(doc, "object", root), "offsets", "$.object");
    if (offs.empty()) throw ConfigError("$.object.offsets", "object model is empty");
    std::vector<Cell> offsets;
    for (std::size_t i = 0; i < offs.size(); ++i)
        offsets.push_back(cell_from_json(offs[i], "$.object.offsets[" + std::to_string(i) + "]"));
    ObjectModel model(std::move(offsets));

    const Cell start = cell_from_json(require(doc, "robot_start", root), "$.robot_start");
    if (!grid.contains(start)) throw ConfigError("$.robot_start", "robot start out of bounds");
    if (grid.is_obstacle(start)) throw ConfigError("$.robot_start", "robot start is an obstacle");

    const auto& acts = require_array(doc, "actions", root);
    if (acts.empty()) throw ConfigError("$.actions", "action set is empty");
    std::vector<Action> actions;
    for (std::size_t i = 0; i < acts.size(); ++i)
        actions.push_back(action_from_json(acts[i], "$.actions[" + std::to_string(i) + "]"));

    Scenario s{"scenario", Domain{std::move(grid), std::move(model), std::move(actions)}, start,
               {}, std::nullopt};
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ConfigError("$.name", "expected a string");
        s.name = doc["name"].get<std::string>();
    }

    const auto& sets = require_array(doc, "uncertainty_sets", root);
    std::set<std::vector<Hypothesis>> seen;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const std::string sp = "$.uncertainty_sets[" + std::to_string(i) + "]";
        if (!sets[i].is_array() || sets[i].empty())
            throw ConfigError(sp, "expected a non-empty array of poses");
        std::vector<Hypothesis> hs;
        for (std::size_t k = 0; k < sets[i].size(); ++k) {
            const std::string hp = sp + "[" + std::to_string(k) + "]";
            const Hypothesis h = pose_from_json(sets[i][k], hp);
            check_pose(s.domain.grid, s.domain.object, h, hp);
            if (s.domain.object.occupies(h, start))
                throw ConfigError(hp, "pose covers the robot start cell");
            hs.push_back(h);
        }
        std::sort(hs.begin(), hs.end());
        if (std::adjacent_find(hs.begin(), hs.end()) != hs.end())
            throw ConfigError(sp, "duplicate pose");
        if (!seen.insert(hs).second) throw ConfigError(sp, "duplicate uncertainty set");
        s.uncertainty_sets.push_back(std::move(hs));
    }
    if (doc.contains("groundtruth")) {
        const Hypothesis h = pose_from_json(doc["groundtruth"], "$.groundtruth");
        check_pose(s.domain.grid, s.domain.object, h, "$.groundtruth");
        s.groundtruth = h;
    }
    return s;
}

inline Scenario load_world_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("$", e.what());
    }
    return load_world(doc);
}

inline nlohmann::json to_json(const Action& a) {
    nlohmann::json j{{"kind", a.kind == Action::Kind::Move ? "move" : "guarded"},
                     {"direction", std::string(to_string(a.direction))}};
    if (a.kind == Action::Kind::GuardedMove) j["max_steps"] = a.max_steps;
    return j;
}

inline nlohmann::json to_json(const Scenario& s) {
    auto cell = [](Cell c) { return nlohmann::json{{"x", c.x}, {"y", c.y}}; };
    nlohmann::json obstacles = nlohmann::json::array();
    for (const Cell& c : s.domain.grid.static_obstacles()) obstacles.push_back(cell(c));
    nlohmann::json offsets = nlohmann::json::array();
    for (const Cell& c : s.domain.object.offsets()) offsets.push_back(cell(c));
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : s.domain.actions) actions.push_back(to_json(a));
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& set : s.uncertainty_sets) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& h : set) arr.push_back(to_json(h));
        sets.push_back(std::move(arr));
    }
    nlohmann::json j{{"name", s.name},
                     {"grid",
                      {{"width", s.domain.grid.width()},
                       {"height", s.domain.grid.height()},
                       {"static_obstacles", std::move(obstacles)}}},
                     {"object", {{"offsets", std::move(offsets)}}},
                     {"robot_start", cell(s.robot_start)},
                     {"actions", std::move(actions)},
                     {"uncertainty_sets", std::move(sets)}};
    if (s.groundtruth) j["groundtruth"] = to_json(*s.groundtruth);
    return j;
}

}  // namespace contactloc

#endif  // CONTACTLOC_SCENARIO_HPP
