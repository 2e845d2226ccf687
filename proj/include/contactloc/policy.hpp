#ifndef CONTACTLOC_POLICY_HPP
#define CONTACTLOC_POLICY_HPP

// History-indexed policies: lookup, exact evaluation, closed-loop execution
// and the JSON policy-file codec.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "contactloc/belief.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

inline constexpr int kPolicyFormatVersion = 1;
inline constexpr std::size_t kDefaultDepthCap = 10000;

struct HistoryStep {
    Action action;
    Observation observation;

    friend auto operator<=>(const HistoryStep&, const HistoryStep&) = default;
};

using History = std::vector<HistoryStep>;

/// `a:<kind>,<dir>,<L>/z:<x>,<y>,<c>`
inline std::string encode(const HistoryStep& s) {
    return "a:" + encode(s.action) + "/z:" + std::to_string(s.observation.robot.x) + ',' +
           std::to_string(s.observation.robot.y) + ',' + (s.observation.contact ? '1' : '0');
}

inline std::string encode(const History& h) {
    std::string out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) out += ';';
        out += encode(h[i]);
    }
    return out;
}

/// Appends one step to an already-encoded history.
inline std::string extend_history(const std::string& key, const HistoryStep& s) {
    return key.empty() ? encode(s) : key + ';' + encode(s);
}

namespace detail {

inline std::optional<int> parse_int(std::string_view s) {
    if (s.empty() || s.size() > 10) return std::nullopt;
    bool neg = false;
    if (s.front() == '-') {
        neg = true;
        s.remove_prefix(1);
        if (s.empty()) return std::nullopt;
    }
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return static_cast<int>(neg ? -v : v);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

inline std::optional<History> decode_history(std::string_view s) {
    History out;
    if (s.empty()) return out;
    for (auto part : detail::split(s, ';')) {
        const auto slash = part.find("/z:");
        if (part.substr(0, 2) != "a:" || slash == std::string_view::npos) return std::nullopt;
        auto action = decode_action(part.substr(2, slash - 2));
        auto z = detail::split(part.substr(slash + 3), ',');
        if (!action || z.size() != 3 || (z[2] != "0" && z[2] != "1")) return std::nullopt;
        auto x = detail::parse_int(z[0]);
        auto y = detail::parse_int(z[1]);
        if (!x || !y) return std::nullopt;
        out.push_back({*action, {{*x, *y}, z[2] == "1"}});
    }
    return out;
}

/// Solver bookkeeping carried alongside a stored policy.
struct PolicyMeta {
    std::string scenario_id;
    std::string solver = "rtdp-bel";
    double epsilon = 1.0;
    std::size_t backups = 0;
    std::size_t rollouts = 0;
    bool converged = true;
    double v_start = 0.0;

    friend bool operator==(const PolicyMeta&, const PolicyMeta&) = default;
};

/// Finite mapping from action-observation histories to actions.
class HistoryPolicy {
public:
    explicit HistoryPolicy(BeliefState start, PolicyMeta meta = {})
        : start_(std::move(start)), meta_(std::move(meta)) {}

    const BeliefState& start() const noexcept { return start_; }
    const PolicyMeta& meta() const noexcept { return meta_; }
    PolicyMeta& meta() noexcept { return meta_; }

    /// Keyed by canonical history encoding; iteration is in sorted key order.
    const std::map<std::string, Action>& table() const noexcept { return table_; }
    std::size_t size() const noexcept { return table_.size(); }
    bool empty() const noexcept { return table_.empty(); }

    void insert(std::string history_key, Action a) { table_[std::move(history_key)] = a; }
    void insert(const History& h, Action a) { insert(encode(h), a); }

    std::optional<Action> lookup(const std::string& history_key) const {
        auto it = table_.find(history_key);
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<Action> lookup(const History& h) const { return lookup(encode(h)); }

    friend bool operator==(const HistoryPolicy&, const HistoryPolicy&) = default;

private:
    BeliefState start_;
    std::map<std::string, Action> table_;
    PolicyMeta meta_;
};

struct TraceStep {
    BeliefState belief;
    Action action;
    Outcome outcome;
};

struct ExecutionTrace {
    std::vector<TraceStep> steps;
    long total_cost = 0;
    BeliefState final_belief;
    bool localized = false;
};

namespace detail {

/// Closed-loop run of `policy` against groundtruth `truth`, starting from
/// `start`. Stops at a goal, a missing history, or the depth cap.
inline ExecutionTrace run_closed_loop(const Domain& d, const HistoryPolicy& policy,
                                      const BeliefState& start, const Hypothesis& truth,
                                      std::size_t depth_cap) {
    ExecutionTrace trace{{}, 0, start, false};
    BeliefState b = start;
    std::string key;
    while (!is_goal(b) && trace.steps.size() < depth_cap) {
        const auto a = policy.lookup(key);
        if (!a) break;
        const Outcome o = simulate_action(d, truth, b.robot(), *a);
        const Observation z{o.next, o.contact};
        BeliefState next = belief_update(d, b, *a, z);
        trace.steps.push_back({b, *a, o});
        trace.total_cost += o.cost;
        key = extend_history(key, {*a, z});
        b = std::move(next);
    }
    trace.localized = is_goal(b);
    trace.final_belief = std::move(b);
    return trace;
}

}  // namespace detail

struct PolicyEvaluation {
    double expected_cost = 0.0;
    bool success = true;
    /// Per-hypothesis closed-loop cost, in the canonical order of `b_start`.
    std::vector<long> costs;

    long total_cost() const noexcept {
        long s = 0;
        for (long c : costs) s += c;
        return s;
    }
};

/// Exact expected cost: uniform mean of the deterministic closed-loop cost
/// under each start hypothesis. A missing branch marks the policy as failed
/// and contributes the cost of the completed prefix.
inline PolicyEvaluation evaluate_exact(const Domain& d, const HistoryPolicy& policy,
                                       const BeliefState& start,
                                       std::size_t depth_cap = kDefaultDepthCap) {
    PolicyEvaluation ev;
    for (const auto& h : start.hypotheses()) {
        const auto trace = detail::run_closed_loop(d, policy, start, h, depth_cap);
        ev.costs.push_back(trace.total_cost);
        ev.success = ev.success && trace.localized;
    }
    ev.expected_cost = static_cast<double>(ev.total_cost()) / static_cast<double>(start.size());
    return ev;
}

inline PolicyEvaluation evaluate_exact(const Domain& d, const HistoryPolicy& policy,
                                       std::size_t depth_cap = kDefaultDepthCap) {
    return evaluate_exact(d, policy, policy.start(), depth_cap);
}

/// Runs the policy against the real object pose. Throws UnrealizableTask when
/// `groundtruth` is not among the start hypotheses.
inline ExecutionTrace execute(const Domain& d, const HistoryPolicy& policy,
                              const Hypothesis& groundtruth,
                              std::size_t depth_cap = kDefaultDepthCap) {
    if (!policy.start().contains(groundtruth))
        throw UnrealizableTask("groundtruth (" + std::to_string(groundtruth.x) + "," +
                               std::to_string(groundtruth.y) + "," +
                               std::to_string(degrees(groundtruth.rot)) +
                               ") is not in the initial hypothesis set");
    return detail::run_closed_loop(d, policy, policy.start(), groundtruth, depth_cap);
}

// ---------------------------------------------------------------------------
// JSON codec

inline nlohmann::json to_json(const Hypothesis& h) {
    return {{"x", h.x}, {"y", h.y}, {"rot", degrees(h.rot)}};
}

inline nlohmann::json to_json(const BeliefState& b) {
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : b.hypotheses()) hs.push_back(to_json(h));
    return {{"r", {{"x", b.robot().x}, {"y", b.robot().y}}}, {"H", std::move(hs)}};
}

inline nlohmann::json to_json(const HistoryPolicy& p) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, action] : p.table())
        entries.push_back({{"history", key}, {"action", encode(action)}});
    const auto& m = p.meta();
    return {{"format_version", kPolicyFormatVersion},
            {"scenario_id", m.scenario_id},
            {"b_start", to_json(p.start())},
            {"epsilon", m.epsilon},
            {"solver", m.solver},
            {"entries", std::move(entries)},
            {"stats",
             {{"backups", m.backups},
              {"rollouts", m.rollouts},
              {"converged", m.converged},
              {"v_start", m.v_start}}}};
}

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& path) {
    if (!j.is_object()) throw FormatError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(path + "." + key, "missing key");
    return *it;
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path, e.what());
    }
}

inline int get_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) throw FormatError(path, "expected an integer");
    return get_as<int>(j, path);
}

}  // namespace detail

inline Hypothesis hypothesis_from_json(const nlohmann::json& j, const std::string& path) {
    const int x = detail::get_int(detail::field(j, "x", path), path + ".x");
    const int y = detail::get_int(detail::field(j, "y", path), path + ".y");
    const int deg = detail::get_int(detail::field(j, "rot", path), path + ".rot");
    const auto rot = rotation_from_degrees(deg);
    if (!rot) throw FormatError(path + ".rot", "rotation must be 0, 90, 180 or 270");
    return {x, y, *rot};
}

inline BeliefState belief_from_json(const nlohmann::json& j, const std::string& path) {
    const auto& r = detail::field(j, "r", path);
    const Cell robot{detail::get_int(detail::field(r, "x", path + ".r"), path + ".r.x"),
                     detail::get_int(detail::field(r, "y", path + ".r"), path + ".r.y")};
    const auto& hs = detail::field(j, "H", path);
    if (!hs.is_array() || hs.empty()) throw FormatError(path + ".H", "expected a non-empty array");
    std::vector<Hypothesis> out;
    for (std::size_t i = 0; i < hs.size(); ++i)
        out.push_back(hypothesis_from_json(hs[i], path + ".H[" + std::to_string(i) + "]"));
    return BeliefState(robot, std::move(out));
}

inline HistoryPolicy policy_from_json(const nlohmann::json& j, const std::string& path = "$") {
    const auto& version = detail::field(j, "format_version", path);
    if (!version.is_number_integer() || version.get<long>() != kPolicyFormatVersion)
        throw FormatError(path + ".format_version",
                          "unsupported policy format version " + version.dump());
    PolicyMeta meta;
    meta.scenario_id =
        detail::get_as<std::string>(detail::field(j, "scenario_id", path), path + ".scenario_id");
    meta.solver = detail::get_as<std::string>(detail::field(j, "solver", path), path + ".solver");
    meta.epsilon = detail::get_as<double>(detail::field(j, "epsilon", path), path + ".epsilon");
    const auto& stats = detail::field(j, "stats", path);
    const std::string sp = path + ".stats";
    meta.backups = detail::get_as<std::size_t>(detail::field(stats, "backups", sp), sp + ".backups");
    meta.rollouts =
        detail::get_as<std::size_t>(detail::field(stats, "rollouts", sp), sp + ".rollouts");
    meta.converged = detail::get_as<bool>(detail::field(stats, "converged", sp), sp + ".converged");
    meta.v_start = detail::get_as<double>(detail::field(stats, "v_start", sp), sp + ".v_start");

    HistoryPolicy policy(belief_from_json(detail::field(j, "b_start", path), path + ".b_start"),
                         std::move(meta));
    const auto& entries = detail::field(j, "entries", path);
    if (!entries.is_array()) throw FormatError(path + ".entries", "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ep = path + ".entries[" + std::to_string(i) + "]";
        const auto key = detail::get_as<std::string>(detail::field(entries[i], "history", ep),
                                                     ep + ".history");
        const auto hist = decode_history(key);
        if (!hist || encode(*hist) != key) throw FormatError(ep + ".history", "malformed history");
        const auto action_str = detail::get_as<std::string>(
            detail::field(entries[i], "action", ep), ep + ".action");
        const auto action = decode_action(action_str);
        if (!action) throw FormatError(ep + ".action", "malformed action '" + action_str + "'");
        if (policy.lookup(key)) throw FormatError(ep + ".history", "duplicate history");
        policy.insert(key, *action);
    }
    return policy;
}

/// Pretty-printed with sorted keys, so equal policies serialize to identical
/// bytes.
inline std::string serialize(const HistoryPolicy& p) { return to_json(p).dump(2) + "\n"; }

inline HistoryPolicy parse_policy(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("$", e.what());
    }
    return policy_from_json(j);
}

}  // namespace contactloc

#endif  // CONTACTLOC_POLICY_HPP
