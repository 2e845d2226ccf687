// contactloc: command-line front end for policy databases, single solves,
// closed-loop execution, the TBL baseline, the exact oracle and benchmarks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "contactloc/contactloc.hpp"

using namespace contactloc;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    bool timing = false;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("--out", "cannot write " + path);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("$", "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t resolve_set(const Scenario& s, const std::string& id) {
    if (auto i = s.find_set(id)) return *i;
    throw ConfigError("--set", "no uncertainty set '" + id + "'");
}

Hypothesis parse_pose(const std::string& text) {
    int x = 0, y = 0, rot = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> x >> c1 >> y >> c2 >> rot) || c1 != ',' || c2 != ',' || !in.eof())
        throw ConfigError("--groundtruth", "expected x,y,rot");
    const auto r = rotation_from_degrees(rot);
    if (!r) throw ConfigError("--groundtruth", "rotation must be 0, 90, 180 or 270");
    return {x, y, *r};
}

std::string pose_str(const Hypothesis& h) {
    return std::to_string(h.x) + "," + std::to_string(h.y) + "," + std::to_string(degrees(h.rot));
}

nlohmann::json trace_json(const ExecutionTrace& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"belief", encode(s.belief)},
                         {"action", encode(s.action)},
                         {"robot", {{"x", s.outcome.next.x}, {"y", s.outcome.next.y}}},
                         {"contact", s.outcome.contact},
                         {"cost", s.outcome.cost}});
    return {{"steps", std::move(steps)},
            {"total_cost", t.total_cost},
            {"localized", t.localized},
            {"final_belief", encode(t.final_belief)}};
}

SolverParams solver_params(const Globals& g, double eps, std::size_t budget) {
    SolverParams sp;
    sp.epsilon = eps;
    sp.rng_seed = g.seed;
    sp.backup_budget = budget;
    return sp;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contact-based object localization planner"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: stdout)");
    app.add_option("--format", g.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--timing", g.timing, "Record wall-clock times (output is then not reproducible)");

    std::string scenario_path;
    double epsilon = 2.0;
    std::size_t budget = SolverParams{}.backup_budget;

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "Build a policy database over a scenario family");
    std::string mode_name = "experience", stats_path;
    bool with_oracle = false;
    pre->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    pre->add_option("--epsilon", epsilon, "Suboptimality bound")->capture_default_str();
    pre->add_option("--mode", mode_name, "experience | naive | random-order | no-experience")
        ->capture_default_str();
    pre->add_option("--stats", stats_path, "Per-problem stats CSV");
    pre->add_option("--budget", budget, "Backup budget per problem")->capture_default_str();
    pre->add_flag("--oracle", with_oracle, "Fill the oracle_cost column (small problems only)");

    // solve
    auto* sol = app.add_subcommand("solve", "Solve one start set with RTDP-Bel");
    std::string set_id = "set000";
    std::string db_path, stats_json;
    sol->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sol->add_option("--set", set_id, "Set id (setNNN) or index")->capture_default_str();
    sol->add_option("--epsilon", epsilon, "Heuristic inflation")->capture_default_str();
    sol->add_option("--db", db_path, "Database to draw experience from")->check(CLI::ExistingFile);
    sol->add_option("--stats", stats_json, "Solve stats JSON");
    sol->add_option("--budget", budget, "Backup budget")->capture_default_str();

    // execute
    auto* exe = app.add_subcommand("execute", "Run a stored policy against a groundtruth pose");
    std::string policy_path, groundtruth;
    exe->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    exe->add_option("--policy", policy_path, "Policy file or database")->required()->check(CLI::ExistingFile);
    exe->add_option("--set", set_id, "Set id when --policy is a database")->capture_default_str();
    exe->add_option("--groundtruth", groundtruth, "x,y,rot (default: the scenario's groundtruth)");

    // tbl
    auto* tbl = app.add_subcommand("tbl", "Run the greedy information-gain baseline");
    std::string tbl_stats;
    tbl->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    tbl->add_option("--set", set_id, "Set id or index")->capture_default_str();
    tbl->add_option("--groundtruth", groundtruth, "x,y,rot; omit to average over the start set");
    tbl->add_option("--stats", tbl_stats, "Stats CSV");

    // oracle
    auto* orc = app.add_subcommand("oracle", "Exact optimal expected cost per start set");
    bool cross_check = false;
    std::size_t limit = 2'000'000;
    orc->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    orc->add_flag("--check", cross_check, "Also run value iteration and compare");
    orc->add_option("--limit", limit, "Reachable belief limit")->capture_default_str();

    // bench
    auto* ben = app.add_subcommand("bench", "Compare methods on every start set of a scenario");
    std::string methods = "rtdp:1,e-rtdp:2";
    ben->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    ben->add_option("--methods", methods,
                    "Comma list of rtdp:<eps>, e-rtdp:<eps>, naive:<eps>, random:<eps>, tbl")
        ->capture_default_str();
    ben->add_option("--budget", budget, "Backup budget per problem")->capture_default_str();

    // gen-scenarios
    auto* gen = app.add_subcommand("gen-scenarios", "Write a scenario family");
    std::string preset, base_path, nominal, extents, rotations, axes = "x";
    gen->add_option("--preset", preset, "w1 | myopia | pocket");
    gen->add_option("--base", base_path, "Scenario whose world is reused")->check(CLI::ExistingFile);
    gen->add_option("--nominal", nominal, "Nominal pose x,y,rot");
    gen->add_option("--extents", extents, "Comma list of half-widths");
    gen->add_option("--axes", axes, "x | xy")->check(CLI::IsMember({"x", "xy"}))->capture_default_str();
    gen->add_option("--rotations", rotations, "Comma list of degrees (default: nominal only)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pre->parsed()) {
            const auto mode = parse_build_mode(mode_name);
            if (!mode) throw ConfigError("--mode", "unknown mode '" + mode_name + "'");
            const auto s = load_world_file(scenario_path);
            BuildOptions o;
            o.epsilon = epsilon;
            o.mode = *mode;
            o.seed = g.seed;
            o.solver = solver_params(g, epsilon, budget);
            o.compute_oracle = with_oracle;
            const auto r = build_database(ProblemFamily::from(s), o);
            write_output(g.out, serialize(r.database));
            if (!stats_path.empty()) write_output(stats_path, stats_csv(r.records, g.timing));
            std::fprintf(stderr, "%zu problems, success %.0f%%, %zu backups\n", r.records.size(),
                         100.0 * r.success_rate(), r.total_backups());
            return r.success_rate() == 1.0 ? 0 : 2;
        }

        if (sol->parsed()) {
            const auto s = load_world_file(scenario_path);
            const auto idx = resolve_set(s, set_id);
            const auto problem = s.problem(idx);
            Heuristic h = inflate(make_base_heuristic(s.domain), epsilon);
            std::string solver = "rtdp-bel";
            if (!db_path.empty()) {
                const auto db = parse_database(read_file(db_path));
                if (const auto* prior = select_experience(db, s.uncertainty_sets[idx])) {
                    h = experience_heuristic_for(s.domain, problem.start, prior,
                                                 BuildMode::Experience, epsilon);
                    solver = "e-rtdp-bel";
                }
            }
            const auto r = solve(problem, std::move(h), solver_params(g, epsilon, budget));
            auto policy = extract_history_policy(problem, r.values);
            policy.meta() = {problem.id,         solver,          epsilon,
                             r.stats.backups,    r.stats.rollouts, r.stats.converged,
                             r.stats.v_start};
            write_output(g.out, serialize(policy));
            if (!stats_json.empty()) {
                const nlohmann::json st{{"scenario_id", problem.id},
                                        {"solver", solver},
                                        {"epsilon", epsilon},
                                        {"backups", r.stats.backups},
                                        {"rollouts", r.stats.rollouts},
                                        {"wall_time_s", g.timing ? r.stats.wall_time : 0.0},
                                        {"converged", r.stats.converged},
                                        {"v_start", r.stats.v_start}};
                write_output(stats_json, st.dump(2) + "\n");
            }
            return r.stats.converged ? 0 : 2;
        }

        if (exe->parsed()) {
            const auto s = load_world_file(scenario_path);
            const auto doc = nlohmann::json::parse(read_file(policy_path));
            HistoryPolicy policy = doc.contains("policies") ? [&] {
                const auto db = database_from_json(doc);
                const auto idx = resolve_set(s, set_id);
                const auto* e = db.find(Scenario::set_id(idx));
                if (!e) throw ConfigError("--set", "database has no policy for " + set_id);
                return e->policy;
            }()
                                                            : policy_from_json(doc);
            Hypothesis truth;
            if (!groundtruth.empty())
                truth = parse_pose(groundtruth);
            else if (s.groundtruth)
                truth = *s.groundtruth;
            else
                throw ConfigError("--groundtruth", "no groundtruth given and none in the scenario");
            const auto t = execute(s.domain, policy, truth);
            write_output(g.out, trace_json(t).dump(2) + "\n");
            return t.localized ? 0 : 2;
        }

        if (tbl->parsed()) {
            const auto s = load_world_file(scenario_path);
            const auto idx = resolve_set(s, set_id);
            const auto b = s.start_belief(idx);
            std::ostringstream csv;
            csv << "scenario_id,|H|,groundtruth,expected_cost,success\r\n";
            bool ok = true;
            if (!groundtruth.empty()) {
                const auto truth = parse_pose(groundtruth);
                const auto t = run_tbl(s.domain, b, truth);
                write_output(g.out, trace_json(t).dump(2) + "\n");
                csv << Scenario::set_id(idx) << ',' << b.size() << ',' << pose_str(truth) << ','
                    << t.total_cost << ',' << (t.localized ? "true" : "false") << "\r\n";
                ok = t.localized;
            } else {
                const auto ev = evaluate_tbl(s.domain, b);
                csv << Scenario::set_id(idx) << ',' << b.size() << ",,"
                    << detail::format_number(ev.expected_cost) << ','
                    << (ev.success ? "true" : "false") << "\r\n";
                if (tbl_stats.empty()) write_output(g.out, csv.str());
                ok = ev.success;
            }
            if (!tbl_stats.empty()) write_output(tbl_stats, csv.str());
            return ok ? 0 : 2;
        }

        if (orc->parsed()) {
            const auto s = load_world_file(scenario_path);
            nlohmann::json rows = nlohmann::json::array();
            std::ostringstream csv;
            csv << "scenario_id,|H|,optimal,optimal_exact,reachable_beliefs,value_iteration_agrees\r\n";
            bool agree = true;
            for (std::size_t i = 0; i < s.uncertainty_sets.size(); ++i) {
                const auto b = s.start_belief(i);
                const auto o = oracle_optimal(s.domain, b, limit);
                std::string check;
                if (cross_check) {
                    const auto v = value_iteration_oracle(s.domain, b, limit);
                    const bool same = v.optimal == o.optimal;
                    agree = agree && same;
                    check = same ? "true" : "false";
                }
                csv << Scenario::set_id(i) << ',' << b.size() << ','
                    << detail::format_number(o.optimal.to_double()) << ',' << o.optimal.str() << ','
                    << o.reachable_beliefs << ',' << check << "\r\n";
                rows.push_back({{"scenario_id", Scenario::set_id(i)},
                                {"|H|", b.size()},
                                {"optimal", o.optimal.str()},
                                {"reachable_beliefs", o.reachable_beliefs},
                                {"value_iteration_agrees",
                                 cross_check ? nlohmann::json(check == "true") : nlohmann::json(nullptr)}});
            }
            write_output(g.out, g.format == "json" ? rows.dump(2) + "\n" : csv.str());
            return agree ? 0 : 2;
        }

        if (ben->parsed()) {
            const auto s = load_world_file(scenario_path);
            std::vector<MethodSpec> ms;
            std::stringstream list(methods);
            for (std::string item; std::getline(list, item, ',');)
                if (!item.empty()) ms.push_back(parse_method(item));
            BenchOptions o;
            o.seed = g.seed;
            o.timing = g.timing;
            o.solver = solver_params(g, 1.0, budget);
            const auto rep = run_benchmark(ProblemFamily::from(s), ms, o);
            write_output(g.out, g.format == "json" ? to_json(rep).dump(2) + "\n" : to_csv(rep));
            for (const auto& sum : rep.summary) {
                std::fprintf(stderr, "%-12s success %5.1f%%  backups %10zu", sum.method.c_str(),
                             100.0 * sum.success_rate, sum.total_backups);
                if (sum.relative_speedup) std::fprintf(stderr, "  speedup %8.3f", *sum.relative_speedup);
                if (sum.relative_cost) std::fprintf(stderr, "  cost %6.3f", *sum.relative_cost);
                std::fprintf(stderr, "\n");
            }
            return 0;
        }

        if (gen->parsed()) {
            Scenario s = presets::w1();
            if (!preset.empty()) {
                auto p = presets::by_name(preset);
                if (!p) throw ConfigError("--preset", "unknown preset '" + preset + "'");
                s = std::move(*p);
            } else if (!base_path.empty()) {
                s = load_world_file(base_path);
            } else {
                throw ConfigError("--preset", "give --preset or --base");
            }
            if (!extents.empty()) {
                if (nominal.empty()) throw ConfigError("--nominal", "required with --extents");
                NestedSpec spec;
                spec.nominal = parse_pose(nominal);
                spec.axes = axes == "xy" ? Axes::XY : Axes::X;
                std::stringstream ex(extents);
                for (std::string e; std::getline(ex, e, ',');) spec.extents.push_back(std::stoi(e));
                std::stringstream rs(rotations);
                for (std::string r; std::getline(rs, r, ',');) {
                    const auto rot = rotation_from_degrees(std::stol(r));
                    if (!rot) throw ConfigError("--rotations", "bad rotation " + r);
                    spec.rotations.push_back(*rot);
                }
                s = generate_nested_scenarios(s, spec);
            }
            write_output(g.out, to_json(s).dump(2) + "\n");
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
