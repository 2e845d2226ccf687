#ifndef CONTACTLOC_PREPROCESS_HPP
#define CONTACTLOC_PREPROCESS_HPP

// Builds a policy database over a finite family of start uncertainties,
// solving problems in increasing order of uncertainty and reusing the most
// similar solved policy as experience for each new solve.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "contactloc/belief.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/experience.hpp"
#include "contactloc/oracle.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/rtdp.hpp"
#include "contactloc/scenario.hpp"

namespace contactloc {

struct ProblemFamily {
    Domain domain;
    Cell robot_start;
    std::vector<std::string> ids;
    std::vector<std::vector<Hypothesis>> sets;

    static ProblemFamily from(const Scenario& s) {
        ProblemFamily f{s.domain, s.robot_start, {}, {}};
        for (std::size_t i = 0; i < s.uncertainty_sets.size(); ++i) {
            f.ids.push_back(Scenario::set_id(i));
            f.sets.push_back(s.uncertainty_sets[i]);
        }
        return f;
    }

    std::size_t size() const noexcept { return sets.size(); }
    BeliefState start(std::size_t i) const { return BeliefState(robot_start, sets.at(i)); }
    Problem problem(std::size_t i) const { return {ids.at(i), domain, start(i)}; }
};

enum class BuildMode { Experience, Naive, RandomOrder, NoExperience };

inline std::string to_string(BuildMode m) {
    switch (m) {
        case BuildMode::Experience: return "experience";
        case BuildMode::Naive: return "naive";
        case BuildMode::RandomOrder: return "random-order";
        case BuildMode::NoExperience: return "no-experience";
    }
    return "?";
}

inline std::optional<BuildMode> parse_build_mode(const std::string& s) {
    if (s == "experience") return BuildMode::Experience;
    if (s == "naive") return BuildMode::Naive;
    if (s == "random-order" || s == "random") return BuildMode::RandomOrder;
    if (s == "no-experience" || s == "none") return BuildMode::NoExperience;
    return std::nullopt;
}

/// Per-problem build outcome.
struct BuildRecord {
    std::string scenario_id;
    std::size_t hypotheses = 0;
    BuildMode mode = BuildMode::Experience;
    double epsilon = 1.0;
    std::size_t backups = 0;
    std::size_t rollouts = 0;
    double wall_time_s = 0.0;
    double v_start = 0.0;
    double expected_cost = 0.0;
    std::optional<Rational> oracle_cost;
    bool converged = false;
    bool success = false;
    std::string experience_from;  // scenario id of the reused policy, if any
    std::string diagnostic;
};

struct DatabaseEntry {
    std::string scenario_id;
    HistoryPolicy policy;
    BuildRecord record;
};

class PolicyDatabase {
public:
    const std::vector<DatabaseEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    void add(DatabaseEntry e) { entries_.push_back(std::move(e)); }

    const DatabaseEntry* find(const std::string& scenario_id) const {
        for (const auto& e : entries_)
            if (e.scenario_id == scenario_id) return &e;
        return nullptr;
    }

private:
    std::vector<DatabaseEntry> entries_;
};

/// Problem indices by ascending |H|, ties by canonical set encoding.
inline std::vector<std::size_t> order_problems(const ProblemFamily& family) {
    if (family.sets.empty()) throw std::invalid_argument("empty problem family");
    std::vector<std::size_t> order(family.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::string> keys;
    for (const auto& s : family.sets) {
        auto sorted = s;
        std::sort(sorted.begin(), sorted.end());
        keys.push_back(encode_hypotheses(sorted));
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (family.sets[a].size() != family.sets[b].size())
            return family.sets[a].size() < family.sets[b].size();
        return keys[a] < keys[b];
    });
    return order;
}

inline double jaccard(const std::vector<Hypothesis>& a, const std::vector<Hypothesis>& b) {
    std::vector<Hypothesis> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    const std::size_t uni = a.size() + b.size() - inter.size();
    return uni == 0 ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
}

/// Stored entry whose start set is most similar (Jaccard) to `current`; ties
/// go to the larger set, then the earlier scenario id. Only successful
/// entries are considered.
inline const DatabaseEntry* select_experience(const PolicyDatabase& db,
                                              const std::vector<Hypothesis>& current) {
    auto sorted = current;
    std::sort(sorted.begin(), sorted.end());
    const DatabaseEntry* best = nullptr;
    double best_sim = -1.0;
    for (const auto& e : db.entries()) {
        if (!e.record.success) continue;
        const auto& hs = e.policy.start().hypotheses();
        const double sim = jaccard(hs, sorted);
        bool better = false;
        if (!best || sim > best_sim + 1e-12) {
            better = true;
        } else if (sim > best_sim - 1e-12) {
            const auto bs = best->policy.start().size();
            better = hs.size() > bs || (hs.size() == bs && e.scenario_id < best->scenario_id);
        }
        if (better) {
            best = &e;
            best_sim = sim;
        }
    }
    return best;
}

struct BuildOptions {
    double epsilon = 2.0;
    BuildMode mode = BuildMode::Experience;
    std::uint64_t seed = 0;
    SolverParams solver;
    bool compute_oracle = false;
    std::size_t oracle_belief_limit = 200'000;
};

struct BuildResult {
    PolicyDatabase database;
    std::vector<BuildRecord> records;  // in solve order

    std::size_t total_backups() const {
        std::size_t n = 0;
        for (const auto& r : records) n += r.backups;
        return n;
    }
    double success_rate() const {
        if (records.empty()) return 1.0;
        std::size_t ok = 0;
        for (const auto& r : records) ok += r.success ? 1 : 0;
        return static_cast<double>(ok) / static_cast<double>(records.size());
    }
    const BuildRecord* record(const std::string& id) const {
        for (const auto& r : records)
            if (r.scenario_id == id) return &r;
        return nullptr;
    }
};

/// Builds the heuristic for one problem from a previously solved entry.
inline Heuristic experience_heuristic_for(const Domain& d, const BeliefState& start,
                                          const DatabaseEntry* prior, BuildMode mode,
                                          double epsilon) {
    if (!prior || mode == BuildMode::NoExperience)
        return inflate(make_base_heuristic(d), epsilon);
    auto exp = mode == BuildMode::Naive ? naive_experience(d, prior->policy)
                                        : rollout_experience(d, prior->policy, start);
    exp.precompute(epsilon);
    return make_experience_heuristic(std::make_shared<const ExperienceMDP>(std::move(exp)));
}

inline BuildResult build_database(const ProblemFamily& family, const BuildOptions& opts) {
    if (!(opts.epsilon >= 1.0)) throw std::invalid_argument("epsilon must be >= 1");
    auto order = order_problems(family);
    if (opts.mode == BuildMode::RandomOrder) {
        std::mt19937_64 rng(opts.seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    BuildResult out;
    for (std::size_t idx : order) {
        const Problem problem = family.problem(idx);
        BuildRecord rec;
        rec.scenario_id = problem.id;
        rec.hypotheses = problem.start.size();
        rec.mode = opts.mode;
        rec.epsilon = opts.epsilon;
        HistoryPolicy policy(problem.start);
        try {
            const DatabaseEntry* prior =
                opts.mode == BuildMode::NoExperience
                    ? nullptr
                    : select_experience(out.database, family.sets[idx]);
            if (prior) rec.experience_from = prior->scenario_id;
            const auto t0 = std::chrono::steady_clock::now();
            Heuristic h = experience_heuristic_for(family.domain, problem.start, prior, opts.mode,
                                                   opts.epsilon);
            SolverParams sp = opts.solver;
            sp.epsilon = opts.epsilon;
            auto solved = solve(problem, std::move(h), sp);
            rec.backups = solved.stats.backups;
            rec.rollouts = solved.stats.rollouts;
            rec.v_start = solved.stats.v_start;
            rec.converged = solved.stats.converged;
            if (!rec.converged) rec.diagnostic = "backup budget exhausted";
            try {
                policy = extract_history_policy(problem, solved.values, sp.max_rollout_depth);
            } catch (const GreedyCycle& e) {
                rec.diagnostic = e.what();
            }
            rec.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const auto ev = evaluate_exact(family.domain, policy, sp.max_rollout_depth);
            rec.expected_cost = ev.expected_cost;
            rec.success = rec.converged && ev.success;
        } catch (const IndistinguishableHypotheses& e) {
            rec.diagnostic = e.what();
        }
        if (opts.compute_oracle && rec.diagnostic.empty()) {
            try {
                rec.oracle_cost =
                    oracle_optimal(family.domain, problem.start, opts.oracle_belief_limit).optimal;
            } catch (const std::length_error&) {
            }
        }
        policy.meta() = PolicyMeta{problem.id,
                                   opts.mode == BuildMode::NoExperience ? "rtdp-bel" : "e-rtdp-bel",
                                   opts.epsilon,
                                   rec.backups,
                                   rec.rollouts,
                                   rec.converged,
                                   rec.v_start};
        out.database.add({problem.id, std::move(policy), rec});
        out.records.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

/// `{format_version, policies: [...], index: {scenario_id: position}}`
inline nlohmann::json to_json(const PolicyDatabase& db) {
    nlohmann::json policies = nlohmann::json::array();
    nlohmann::json index = nlohmann::json::object();
    for (std::size_t i = 0; i < db.entries().size(); ++i) {
        policies.push_back(to_json(db.entries()[i].policy));
        index[db.entries()[i].scenario_id] = i;
    }
    return {{"format_version", kPolicyFormatVersion},
            {"policies", std::move(policies)},
            {"index", std::move(index)}};
}

inline std::string serialize(const PolicyDatabase& db) { return to_json(db).dump(2) + "\n"; }

inline PolicyDatabase database_from_json(const nlohmann::json& j) {
    const auto& version = detail::field(j, "format_version", "$");
    if (!version.is_number_integer() || version.get<long>() != kPolicyFormatVersion)
        throw FormatError("$.format_version", "unsupported database format version");
    const auto& policies = detail::field(j, "policies", "$");
    if (!policies.is_array()) throw FormatError("$.policies", "expected an array");
    PolicyDatabase db;
    for (std::size_t i = 0; i < policies.size(); ++i) {
        auto p = policy_from_json(policies[i], "$.policies[" + std::to_string(i) + "]");
        BuildRecord rec;
        rec.scenario_id = p.meta().scenario_id;
        rec.hypotheses = p.start().size();
        rec.epsilon = p.meta().epsilon;
        rec.backups = p.meta().backups;
        rec.rollouts = p.meta().rollouts;
        rec.converged = p.meta().converged;
        rec.v_start = p.meta().v_start;
        rec.success = p.meta().converged;
        db.add({p.meta().scenario_id, std::move(p), std::move(rec)});
    }
    const auto& index = detail::field(j, "index", "$");
    if (!index.is_object()) throw FormatError("$.index", "expected an object");
    for (auto it = index.begin(); it != index.end(); ++it) {
        const std::string p = "$.index." + it.key();
        if (!it.value().is_number_unsigned() || it.value().get<std::size_t>() >= db.size() ||
            db.entries()[it.value().get<std::size_t>()].scenario_id != it.key())
            throw FormatError(p, "index does not match policies");
    }
    return db;
}

inline PolicyDatabase parse_database(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("$", e.what());
    }
    return database_from_json(j);
}

namespace detail {

/// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
    return nlohmann::json(v).dump();
}

}  // namespace detail

/// `scenario_id,|H|,mode,epsilon,backups,wall_time_s,expected_cost,oracle_cost,success`
/// Rows sorted by scenario id. Wall times are written only when `timing` is
/// set, so untimed output is reproducible byte for byte.
inline std::string stats_csv(const std::vector<BuildRecord>& records, bool timing = false) {
    std::vector<const BuildRecord*> rows;
    for (const auto& r : records) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const BuildRecord* a, const BuildRecord* b) {
        return a->scenario_id < b->scenario_id;
    });
    std::ostringstream out;
    out << "scenario_id,|H|,mode,epsilon,backups,wall_time_s,expected_cost,oracle_cost,success\r\n";
    for (const auto* r : rows) {
        out << r->scenario_id << ',' << r->hypotheses << ',' << to_string(r->mode) << ','
            << detail::format_number(r->epsilon) << ',' << r->backups << ','
            << detail::format_number(timing ? r->wall_time_s : 0.0) << ','
            << detail::format_number(r->expected_cost) << ','
            << (r->oracle_cost ? detail::format_number(r->oracle_cost->to_double()) : "") << ','
            << (r->success ? "true" : "false") << "\r\n";
    }
    return out.str();
}

}  // namespace contactloc

#endif  // CONTACTLOC_PREPROCESS_HPP
