#ifndef CONTACTLOC_BENCH_HPP
#define CONTACTLOC_BENCH_HPP

// Benchmark orchestration: runs every method on every problem of a family and
// reports success, effort (Bellman backups, optionally wall time) and cost
// relative to plain RTDP-Bel at eps = 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "contactloc/oracle.hpp"
#include "contactloc/preprocess.hpp"
#include "contactloc/tbl.hpp"

namespace contactloc {

struct MethodSpec {
    enum class Kind { Rtdp, ERtdp, Naive, Random, Tbl };

    Kind kind = Kind::Rtdp;
    double epsilon = 1.0;

    std::string name() const {
        switch (kind) {
            case Kind::Rtdp: return "rtdp";
            case Kind::ERtdp: return "e-rtdp";
            case Kind::Naive: return "naive";
            case Kind::Random: return "random";
            case Kind::Tbl: return "tbl";
        }
        return "?";
    }

    BuildMode mode() const {
        switch (kind) {
            case Kind::ERtdp: return BuildMode::Experience;
            case Kind::Naive: return BuildMode::Naive;
            case Kind::Random: return BuildMode::RandomOrder;
            default: return BuildMode::NoExperience;
        }
    }

    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// `rtdp:1`, `e-rtdp:2` (or `ertdp:2`), `naive:2`, `random:2`, `tbl`.
inline MethodSpec parse_method(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    MethodSpec m;
    if (kind == "rtdp") m.kind = MethodSpec::Kind::Rtdp;
    else if (kind == "e-rtdp" || kind == "ertdp") m.kind = MethodSpec::Kind::ERtdp;
    else if (kind == "naive") m.kind = MethodSpec::Kind::Naive;
    else if (kind == "random") m.kind = MethodSpec::Kind::Random;
    else if (kind == "tbl") m.kind = MethodSpec::Kind::Tbl;
    else throw std::invalid_argument("unknown method '" + s + "'");
    if (colon != std::string::npos) {
        std::size_t used = 0;
        const std::string eps = s.substr(colon + 1);
        try {
            m.epsilon = std::stod(eps, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != eps.size() || !(m.epsilon >= 1.0))
            throw std::invalid_argument("bad epsilon in method '" + s + "'");
    }
    return m;
}

struct ReportRow {
    std::string scenario_id;
    std::size_t hypotheses = 0;
    std::string method;
    double epsilon = 1.0;
    bool success = false;
    std::size_t backups = 0;
    double wall_time_s = 0.0;
    double expected_cost = 0.0;
    std::optional<Rational> oracle_cost;
    std::optional<double> relative_speedup;
    std::optional<double> relative_cost;
};

struct MethodSummary {
    std::string method;
    double epsilon = 1.0;
    std::size_t problems = 0;
    double success_rate = 0.0;
    std::size_t total_backups = 0;
    std::optional<double> relative_speedup;  // sum of reference backups / sum of own
    std::optional<double> relative_cost;     // sum of own cost / sum of reference cost
};

struct BenchmarkReport {
    std::vector<ReportRow> rows;  // sorted by (scenario_id, method, epsilon)
    std::vector<MethodSummary> summary;
    std::string reference;  // method label used for relative columns
};

struct BenchOptions {
    std::uint64_t seed = 0;
    SolverParams solver;
    bool timing = false;
    std::size_t oracle_belief_limit = 200'000;
    TblParams tbl;
};

inline std::string method_label(const MethodSpec& m) {
    if (m.kind == MethodSpec::Kind::Tbl) return m.name();
    return m.name() + ":" + detail::format_number(m.epsilon);
}

namespace detail {

inline ReportRow make_row(const std::string& id, std::size_t hypotheses, const MethodSpec& m) {
    ReportRow row;
    row.scenario_id = id;
    row.hypotheses = hypotheses;
    row.method = m.name();
    row.epsilon = m.epsilon;
    return row;
}

}  // namespace detail

inline BenchmarkReport run_benchmark(const ProblemFamily& family,
                                     const std::vector<MethodSpec>& methods,
                                     const BenchOptions& opts) {
    if (methods.empty()) throw std::invalid_argument("no methods given");

    std::map<std::string, std::optional<Rational>> oracle;
    for (std::size_t i = 0; i < family.size(); ++i) {
        try {
            oracle[family.ids[i]] =
                oracle_optimal(family.domain, family.start(i), opts.oracle_belief_limit).optimal;
        } catch (const std::length_error&) {
            oracle[family.ids[i]] = std::nullopt;
        } catch (const IndistinguishableHypotheses&) {
            oracle[family.ids[i]] = std::nullopt;
        }
    }

    // rows_by_method[m][scenario]
    std::vector<std::map<std::string, ReportRow>> per_method(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto& spec = methods[m];
        if (spec.kind == MethodSpec::Kind::Tbl) {
            for (std::size_t i = 0; i < family.size(); ++i) {
                const auto t0 = std::chrono::steady_clock::now();
                ReportRow row = detail::make_row(family.ids[i], family.sets[i].size(), spec);
                try {
                    const auto ev = evaluate_tbl(family.domain, family.start(i), opts.tbl);
                    row.success = ev.success;
                    row.expected_cost = ev.expected_cost;
                } catch (const Error&) {
                    row.success = false;
                }
                row.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                row.oracle_cost = oracle[row.scenario_id];
                per_method[m].emplace(row.scenario_id, std::move(row));
            }
            continue;
        }
        BuildOptions bo;
        bo.epsilon = spec.epsilon;
        bo.mode = spec.mode();
        bo.seed = opts.seed;
        bo.solver = opts.solver;
        bo.solver.rng_seed = opts.seed;
        const auto built = build_database(family, bo);
        for (const auto& rec : built.records) {
            ReportRow row = detail::make_row(rec.scenario_id, rec.hypotheses, spec);
            row.success = rec.success;
            row.backups = rec.backups;
            row.wall_time_s = rec.wall_time_s;
            row.expected_cost = rec.expected_cost;
            row.oracle_cost = oracle[row.scenario_id];
            per_method[m].emplace(row.scenario_id, std::move(row));
        }
    }

    std::size_t ref = 0;
    for (std::size_t m = 0; m < methods.size(); ++m)
        if (methods[m].kind == MethodSpec::Kind::Rtdp && methods[m].epsilon == 1.0) {
            ref = m;
            break;
        }

    BenchmarkReport report;
    report.reference = method_label(methods[ref]);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        MethodSummary sum;
        sum.method = method_label(methods[m]);
        sum.epsilon = methods[m].epsilon;
        std::size_t ok = 0;
        std::size_t ref_backups = 0;
        double own_cost = 0.0;
        double ref_cost = 0.0;
        bool comparable = true;
        for (auto& [id, row] : per_method[m]) {
            const ReportRow& base = per_method[ref].at(id);
            if (row.backups > 0)
                row.relative_speedup =
                    static_cast<double>(base.backups) / static_cast<double>(row.backups);
            else if (base.backups == 0)
                row.relative_speedup = 1.0;
            if (base.expected_cost > 0.0)
                row.relative_cost = row.expected_cost / base.expected_cost;
            else if (row.expected_cost == 0.0)
                row.relative_cost = 1.0;
            ++sum.problems;
            ok += row.success ? 1 : 0;
            sum.total_backups += row.backups;
            ref_backups += base.backups;
            own_cost += row.expected_cost;
            ref_cost += base.expected_cost;
            comparable = comparable && row.success && base.success;
            report.rows.push_back(row);
        }
        sum.success_rate =
            sum.problems ? static_cast<double>(ok) / static_cast<double>(sum.problems) : 1.0;
        if (sum.total_backups > 0)
            sum.relative_speedup =
                static_cast<double>(ref_backups) / static_cast<double>(sum.total_backups);
        else if (ref_backups == 0)
            sum.relative_speedup = 1.0;
        if (comparable && ref_cost > 0.0) sum.relative_cost = own_cost / ref_cost;
        report.summary.push_back(std::move(sum));
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.scenario_id, a.method, a.epsilon) <
               std::tie(b.scenario_id, b.method, b.epsilon);
    });
    if (!opts.timing)
        for (auto& r : report.rows) r.wall_time_s = 0.0;
    return report;
}

namespace detail {

inline std::string csv_optional(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

}  // namespace detail

/// RFC 4180 style: header row, CRLF line endings, no quoting needed since no
/// field contains separators.
inline std::string to_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "scenario_id,|H|,method,epsilon,success,backups,wall_time_s,expected_cost,"
           "oracle_cost,relative_speedup,relative_cost\r\n";
    for (const auto& r : report.rows) {
        out << r.scenario_id << ',' << r.hypotheses << ',' << r.method << ','
            << detail::format_number(r.epsilon) << ',' << (r.success ? "true" : "false") << ','
            << r.backups << ',' << detail::format_number(r.wall_time_s) << ','
            << detail::format_number(r.expected_cost) << ','
            << (r.oracle_cost ? detail::format_number(r.oracle_cost->to_double()) : "") << ','
            << detail::csv_optional(r.relative_speedup) << ','
            << detail::csv_optional(r.relative_cost) << "\r\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const BenchmarkReport& report) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"scenario_id", r.scenario_id},
                        {"|H|", r.hypotheses},
                        {"method", r.method},
                        {"epsilon", r.epsilon},
                        {"success", r.success},
                        {"backups", r.backups},
                        {"wall_time_s", r.wall_time_s},
                        {"expected_cost", r.expected_cost},
                        {"oracle_cost", r.oracle_cost ? nlohmann::json(r.oracle_cost->str())
                                                      : nlohmann::json(nullptr)},
                        {"relative_speedup", opt(r.relative_speedup)},
                        {"relative_cost", opt(r.relative_cost)}});
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& s : report.summary)
        summary.push_back({{"method", s.method},
                           {"problems", s.problems},
                           {"success_rate", s.success_rate},
                           {"total_backups", s.total_backups},
                           {"relative_speedup", opt(s.relative_speedup)},
                           {"relative_cost", opt(s.relative_cost)}});
    return {{"reference", report.reference}, {"rows", std::move(rows)}, {"summary", std::move(summary)}};
}

}  // namespace contactloc

#endif  // CONTACTLOC_BENCH_HPP
