#ifndef CONTACTLOC_WORLD_HPP
#define CONTACTLOC_WORLD_HPP

// Grid worlds, object models, hypothesis poses and the deterministic
// guarded-move contact simulation.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contactloc/errors.hpp"

namespace contactloc {

struct Cell {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) noexcept {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

enum class Direction : std::uint8_t { PosX, NegX, PosY, NegY };

inline Cell step(Cell c, Direction d) noexcept {
    switch (d) {
        case Direction::PosX: return {c.x + 1, c.y};
        case Direction::NegX: return {c.x - 1, c.y};
        case Direction::PosY: return {c.x, c.y + 1};
        case Direction::NegY: return {c.x, c.y - 1};
    }
    return c;
}

inline std::string_view to_string(Direction d) noexcept {
    switch (d) {
        case Direction::PosX: return "+x";
        case Direction::NegX: return "-x";
        case Direction::PosY: return "+y";
        case Direction::NegY: return "-y";
    }
    return "?";
}

inline std::optional<Direction> parse_direction(std::string_view s) noexcept {
    if (s == "+x") return Direction::PosX;
    if (s == "-x") return Direction::NegX;
    if (s == "+y") return Direction::PosY;
    if (s == "-y") return Direction::NegY;
    return std::nullopt;
}

/// Quarter-turn rotation, stored in degrees.
enum class Rotation : std::uint16_t { R0 = 0, R90 = 90, R180 = 180, R270 = 270 };

inline int degrees(Rotation r) noexcept { return static_cast<int>(r); }

inline std::optional<Rotation> rotation_from_degrees(long deg) noexcept {
    switch (deg) {
        case 0: return Rotation::R0;
        case 90: return Rotation::R90;
        case 180: return Rotation::R180;
        case 270: return Rotation::R270;
        default: return std::nullopt;
    }
}

/// Counter-clockwise rotation of an object-frame offset.
inline Cell rotate(Cell offset, Rotation r) noexcept {
    switch (r) {
        case Rotation::R0: return offset;
        case Rotation::R90: return {-offset.y, offset.x};
        case Rotation::R180: return {-offset.x, -offset.y};
        case Rotation::R270: return {offset.y, -offset.x};
    }
    return offset;
}

inline Cell unrotate(Cell c, Rotation r) noexcept {
    switch (r) {
        case Rotation::R0: return c;
        case Rotation::R90: return rotate(c, Rotation::R270);
        case Rotation::R180: return rotate(c, Rotation::R180);
        case Rotation::R270: return rotate(c, Rotation::R90);
    }
    return c;
}

/// A candidate object pose. Ordering is (x, y, rot), the canonical order used
/// for hypothesis sets.
struct Hypothesis {
    int x = 0;
    int y = 0;
    Rotation rot = Rotation::R0;

    friend auto operator<=>(const Hypothesis&, const Hypothesis&) = default;
};

struct Action {
    enum class Kind : std::uint8_t { Move, GuardedMove };

    Kind kind = Kind::Move;
    Direction direction = Direction::PosX;
    int max_steps = 1;

    static Action move(Direction d) noexcept { return {Kind::Move, d, 1}; }
    static Action guarded(Direction d, int max_steps) noexcept {
        return {Kind::GuardedMove, d, max_steps};
    }

    /// Number of cells the action may attempt to enter.
    int reach() const noexcept { return kind == Kind::Move ? 1 : max_steps; }

    friend auto operator<=>(const Action&, const Action&) = default;
};

/// `<kind>,<dir>,<L>`, e.g. `move,+x,1` or `guarded,-y,9`.
inline std::string encode(const Action& a) {
    std::string out = a.kind == Action::Kind::Move ? "move," : "guarded,";
    out += to_string(a.direction);
    out += ',';
    out += std::to_string(a.reach());
    return out;
}

inline std::optional<Action> decode_action(std::string_view s) {
    const auto c1 = s.find(',');
    if (c1 == std::string_view::npos) return std::nullopt;
    const auto c2 = s.find(',', c1 + 1);
    if (c2 == std::string_view::npos) return std::nullopt;
    const auto kind = s.substr(0, c1);
    const auto dir = parse_direction(s.substr(c1 + 1, c2 - c1 - 1));
    const auto steps_str = s.substr(c2 + 1);
    if (!dir || steps_str.empty() || steps_str.size() > 9) return std::nullopt;
    int steps = 0;
    for (char ch : steps_str) {
        if (ch < '0' || ch > '9') return std::nullopt;
        steps = steps * 10 + (ch - '0');
    }
    if (steps < 1) return std::nullopt;
    if (kind == "move") {
        if (steps != 1) return std::nullopt;
        return Action::move(*dir);
    }
    if (kind == "guarded") return Action::guarded(*dir, steps);
    return std::nullopt;
}

class GridWorld {
public:
    GridWorld(int width, int height, std::vector<Cell> static_obstacles = {})
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw ConfigError("$.grid", "width and height must be >= 1");
        blocked_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
        for (const Cell& c : static_obstacles) {
            if (!contains(c))
                throw ConfigError("$.grid.static_obstacles", "obstacle outside the grid");
            blocked_[index(c)] = 1;
        }
        std::sort(static_obstacles.begin(), static_obstacles.end());
        static_obstacles.erase(std::unique(static_obstacles.begin(), static_obstacles.end()),
                               static_obstacles.end());
        obstacles_ = std::move(static_obstacles);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const std::vector<Cell>& static_obstacles() const noexcept { return obstacles_; }

    bool contains(Cell c) const noexcept {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }

    /// Precondition: `contains(c)`.
    bool is_obstacle(Cell c) const noexcept { return blocked_[index(c)] != 0; }

    friend bool operator==(const GridWorld& a, const GridWorld& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.obstacles_ == b.obstacles_;
    }

private:
    std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.x);
    }

    int width_;
    int height_;
    std::vector<Cell> obstacles_;
    std::vector<std::uint8_t> blocked_;
};

/// Rigid object shape: a set of cells relative to an anchor at (0,0).
class ObjectModel {
public:
    explicit ObjectModel(std::vector<Cell> offsets) : offsets_(std::move(offsets)) {
        if (offsets_.empty()) throw ConfigError("$.object.offsets", "object model is empty");
        std::sort(offsets_.begin(), offsets_.end());
        if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
            throw ConfigError("$.object.offsets", "duplicate offset");
    }

    const std::vector<Cell>& offsets() const noexcept { return offsets_; }

    bool occupies(const Hypothesis& h, Cell c) const noexcept {
        const Cell local = unrotate({c.x - h.x, c.y - h.y}, h.rot);
        return std::binary_search(offsets_.begin(), offsets_.end(), local);
    }

    /// World cells covered by the object at pose `h`, sorted.
    std::vector<Cell> cells(const Hypothesis& h) const {
        std::vector<Cell> out;
        out.reserve(offsets_.size());
        for (const Cell& o : offsets_) {
            const Cell r = rotate(o, h.rot);
            out.push_back({r.x + h.x, r.y + h.y});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const ObjectModel&, const ObjectModel&) = default;

private:
    std::vector<Cell> offsets_;
};

inline bool occupied(const ObjectModel& model, const Hypothesis& h, Cell c) noexcept {
    return model.occupies(h, c);
}

/// True iff every cell of the object at `h` lies inside the grid.
inline bool fits(const GridWorld& grid, const ObjectModel& model, const Hypothesis& h) {
    const auto cells = model.cells(h);
    return std::all_of(cells.begin(), cells.end(), [&](Cell c) { return grid.contains(c); });
}

struct Outcome {
    Cell next;
    bool contact = false;
    int cost = 1;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Everything fixed across the problems of one scenario family.
struct Domain {
    GridWorld grid;
    ObjectModel object;
    std::vector<Action> actions;
};

/// Boundary, static obstacle, or the object under `h`.
inline bool blocked(const GridWorld& grid, const ObjectModel& model, const Hypothesis& h,
                    Cell c) noexcept {
    return !grid.contains(c) || grid.is_obstacle(c) || model.occupies(h, c);
}

/// Deterministic outcome of `a` from robot cell `r` when the object sits at `h`.
/// Blocked attempts leave the robot in place and cost one unit.
inline Outcome simulate_action(const GridWorld& grid, const ObjectModel& model,
                               const Hypothesis& h, Cell r, const Action& a) {
    if (blocked(grid, model, h, r))
        throw CorruptedState("robot cell (" + std::to_string(r.x) + "," + std::to_string(r.y) +
                             ") is occupied");
    Cell cur = r;
    int moved = 0;
    const int reach = a.reach();
    while (moved < reach) {
        const Cell next = step(cur, a.direction);
        if (blocked(grid, model, h, next)) return {cur, true, moved + 1};
        cur = next;
        ++moved;
    }
    return {cur, false, moved};
}

inline Outcome simulate_action(const Domain& d, const Hypothesis& h, Cell r, const Action& a) {
    return simulate_action(d.grid, d.object, h, r, a);
}

/// In-grid cells whose occupancy differs between at least two hypotheses.
/// Sorted. Empty when fewer than two hypotheses are given.
inline std::vector<Cell> differing_cells(const ObjectModel& model, std::span<const Hypothesis> hs) {
    std::vector<Cell> all;
    for (const auto& h : hs) {
        auto cells = model.cells(h);
        all.insert(all.end(), cells.begin(), cells.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<Cell> out;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        if (j - i < hs.size()) out.push_back(all[i]);
        i = j;
    }
    return out;
}

/// Returns a pair of hypotheses whose occupancy is identical, if any.
inline std::optional<std::pair<Hypothesis, Hypothesis>> find_indistinguishable(
    const ObjectModel& model, std::span<const Hypothesis> hs) {
    std::vector<std::pair<std::vector<Cell>, Hypothesis>> footprints;
    footprints.reserve(hs.size());
    for (const auto& h : hs) footprints.emplace_back(model.cells(h), h);
    std::sort(footprints.begin(), footprints.end());
    for (std::size_t i = 1; i < footprints.size(); ++i)
        if (footprints[i].first == footprints[i - 1].first)
            return std::pair{footprints[i - 1].second, footprints[i].second};
    return std::nullopt;
}

}  // namespace contactloc

#endif  // CONTACTLOC_WORLD_HPP
