// wen: scenario-driven co-optimization CLI.
//
// Exit codes (stable contract):
//   0  solved to the requested gap (or validation passed)
//   2  bad input: unreadable file, malformed JSON, bad flags
//   3  scenario rejected by validation (or mode precondition)
//   4  model infeasible or unbounded
//   5  solver hit a node/time limit before reaching the requested gap

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wen/audit.hpp"
#include "wen/milp/branch_bound.hpp"
#include "wen/milp/mps.hpp"
#include "wen/nexus/model.hpp"
#include "wen/pea.hpp"
#include "wen/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitInvalidScenario = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitLimit = 5;

struct CliError {
    int code;
    std::string message;
};

struct CommonOpts {
    std::string scenario_path;
    std::string seed_profile;
    std::string out_dir;
    double gap = 5e-2;
    double time_limit = 300.0;
};

void add_scenario_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("scenario", o.scenario_path, "scenario JSON file");
    cmd->add_option("--seed-profile", o.seed_profile,
                    "use a bundled scenario instead of a file (paper_4mwen, reduced_2mwen)");
}

void add_out_opt(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out_dir, "output directory (default $WEN_OUT_DIR or ./wen_out)");
}

void add_solver_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--gap", o.gap, "relative MIP gap target")->check(CLI::PositiveNumber);
    cmd->add_option("--time-limit", o.time_limit, "per-solve wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);
}

Scenario load_scenario(const CommonOpts& o) {
    if (!o.seed_profile.empty()) {
        if (!o.scenario_path.empty())
            throw CliError{kExitBadInput, "give either a scenario file or --seed-profile"};
        try {
            return builtin_scenario(o.seed_profile);
        } catch (const std::invalid_argument& e) {
            throw CliError{kExitBadInput, e.what()};
        }
    }
    if (o.scenario_path.empty())
        throw CliError{kExitBadInput, "missing scenario: give a file or --seed-profile"};
    std::ifstream in(o.scenario_path);
    if (!in) throw CliError{kExitBadInput, "cannot read scenario file: " + o.scenario_path};
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioParseError& e) {
        throw CliError{kExitBadInput, o.scenario_path + ": " + e.what()};
    }
}

Scenario load_valid_scenario(const CommonOpts& o) {
    Scenario s = load_scenario(o);
    auto report = validate_scenario(s);
    if (!report.ok())
        throw CliError{kExitInvalidScenario, "scenario invalid: " + report.violations[0].where +
                                                 ": " + report.violations[0].message};
    return s;
}

fs::path resolve_out_dir(const CommonOpts& o) {
    std::string dir = o.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("WEN_OUT_DIR")) dir = env;
        if (dir.empty()) dir = "wen_out";
    }
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw CliError{kExitBadInput, "cannot create output directory: " + p.string()};
    return p;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw CliError{kExitBadInput, "cannot write " + path.string()};
    out << text;
}

std::string scenario_label(const CommonOpts& o) {
    return o.seed_profile.empty() ? o.scenario_path : ("builtin:" + o.seed_profile);
}

// columns follow the nomenclature order used by the model builder
std::string schedule_csv(const nexus::Schedule& sched, size_t i) {
    const nexus::MwenSchedule& ms = sched.mwens[i];
    std::vector<std::pair<std::string, const std::vector<double>*>> cols;
    auto add2 = [&](const char* base, const char* k,
                    const std::vector<std::vector<double>>& rows) {
        for (size_t a = 0; a < rows.size(); ++a)
            cols.push_back({std::string(base) + "[" + k + "=" + std::to_string(a) + "]",
                            &rows[a]});
    };
    auto add = [&](const char* base, const std::vector<double>& v) {
        if (!v.empty()) cols.push_back({base, &v});
    };
    add2("PG", "g", ms.pg);
    add2("uG", "g", ms.ug);
    add2("vG", "g", ms.vg);
    add2("PESc", "b", ms.pesc);
    add2("PESd", "b", ms.pesd);
    add2("eESc", "b", ms.eesc);
    add2("eESd", "b", ms.eesd);
    add2("EL", "b", ms.el);
    add2("WES", "b", ms.wes);
    add("Pgrid+", ms.pgrid_imp);
    add("Pgrid-", ms.pgrid_exp);
    add("PN", ms.pn);
    add("PE", ms.pe);
    add("Pnet", ms.pnet);
    add("WWW", ms.www);
    add("uWW", ms.uww);
    add("WLrWW", ms.wlrww);
    add("PWW", ms.pww);
    add("PWWpump", ms.pww_pump);
    add("WWT", ms.wwt);
    add("uWT", ms.uwt);
    add("PWT", ms.pwt);
    add("PWTpump", ms.pwt_pump);
    add2("WSTc", "k", ms.wstc);
    add2("WSTd", "k", ms.wstd);
    add2("spST", "k", ms.sp);
    add2("svST", "k", ms.sv);
    add2("WLST", "k", ms.wlst);
    add2("PSTpump", "k", ms.pst_pump);
    add("Wmain+", ms.wmain);
    add("WN", ms.wn);
    add("WE", ms.we);
    if (sched.mode == nexus::Mode::Separate) {
        add("p+", sched.p_plus);
        add("p-", sched.p_minus);
    }

    std::ostringstream out;
    out << "t";
    for (const auto& [name, v] : cols) out << ',' << name;
    out << '\n';
    for (int t = 0; t < sched.horizon; ++t) {
        out << t;
        for (const auto& [name, v] : cols) out << ',' << fmt((*v)[static_cast<size_t>(t)]);
        out << '\n';
    }
    return out.str();
}

std::string costs_csv(const std::vector<audit::CostBreakdown>& costs) {
    std::ostringstream out;
    out << "name,startup,no_load_generation,marginal_generation,grid_purchase,grid_sale,"
           "network_power,water_no_load,main_water,network_water,total\n";
    for (const auto& c : costs) {
        out << c.name << ',' << fmt(c.startup) << ',' << fmt(c.no_load_generation) << ','
            << fmt(c.marginal_generation) << ',' << fmt(c.grid_purchase) << ',' << fmt(c.grid_sale)
            << ',' << fmt(c.network_power) << ',' << fmt(c.water_no_load) << ','
            << fmt(c.main_water) << ',' << fmt(c.network_water) << ',' << fmt(c.total) << '\n';
    }
    return out.str();
}

std::string ledger_csv(const pea::ExchangeLedger& ledger) {
    std::ostringstream out;
    out << "m,t,net_exchange,network_exchange,external_import,external_export\n";
    for (int m = 0; m < ledger.members(); ++m)
        for (int t = 0; t < ledger.horizon(); ++t) {
            const auto& e = ledger.entries[static_cast<size_t>(m)][static_cast<size_t>(t)];
            out << m << ',' << t << ',' << fmt(e.net_exchange) << ',' << fmt(e.network_exchange)
                << ',' << fmt(e.external_import) << ',' << fmt(e.external_export) << '\n';
        }
    return out.str();
}

// grouped bar chart of per-MWEN costs, two bars per member
std::string comparison_svg(const audit::ComparisonTable& table) {
    const int n = static_cast<int>(table.rows.size()) - 1;  // drop TOTAL
    const double width = 120.0 * n + 100.0, height = 320.0;
    const double plot_h = 230.0, base_y = 270.0, left = 70.0;
    double peak = 1.0;
    for (int i = 0; i < n; ++i)
        peak = std::max({peak, table.rows[static_cast<size_t>(i)].baseline,
                         table.rows[static_cast<size_t>(i)].candidate});
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\">\n";
    svg << "<text x=\"" << fmt(width / 2)
        << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">Per-MWEN operating cost "
           "[$]</text>\n";
    svg << "<line x1=\"" << fmt(left - 10) << "\" y1=\"" << fmt(base_y) << "\" x2=\""
        << fmt(width - 20) << "\" y2=\"" << fmt(base_y) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i < n; ++i) {
        const auto& r = table.rows[static_cast<size_t>(i)];
        double x0 = left + 120.0 * i;
        double h_sep = plot_h * r.baseline / peak;
        double h_net = plot_h * r.candidate / peak;
        svg << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(base_y - h_sep)
            << "\" width=\"40\" height=\"" << fmt(h_sep) << "\" fill=\"#888888\"/>\n";
        svg << "<rect x=\"" << fmt(x0 + 45) << "\" y=\"" << fmt(base_y - h_net)
            << "\" width=\"40\" height=\"" << fmt(h_net) << "\" fill=\"#2266bb\"/>\n";
        svg << "<text x=\"" << fmt(x0 + 42) << "\" y=\"" << fmt(base_y + 18)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << r.name << "</text>\n";
        svg << "<text x=\"" << fmt(x0 + 20) << "\" y=\"" << fmt(base_y - h_sep - 4)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(std::round(r.baseline))
            << "</text>\n";
        svg << "<text x=\"" << fmt(x0 + 65) << "\" y=\"" << fmt(base_y - h_net - 4)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(std::round(r.candidate))
            << "</text>\n";
    }
    svg << "<rect x=\"" << fmt(left) << "\" y=\"295\" width=\"12\" height=\"12\" "
           "fill=\"#888888\"/>\n";
    svg << "<text x=\"" << fmt(left + 18) << "\" y=\"305\" font-size=\"12\">separate</text>\n";
    svg << "<rect x=\"" << fmt(left + 110) << "\" y=\"295\" width=\"12\" height=\"12\" "
           "fill=\"#2266bb\"/>\n";
    svg << "<text x=\"" << fmt(left + 128) << "\" y=\"305\" font-size=\"12\">networked</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

struct SolveOutcome {
    milp::Solution sol;
    nexus::Schedule sched;
    int exit_code = kExitOk;
};

SolveOutcome run_solve(const milp::MilpProblem& p, const nexus::VariableIndex& idx,
                       const Scenario& s, const CommonOpts& o) {
    milp::SolverConfig cfg;
    cfg.relative_mip_gap = o.gap;
    cfg.time_limit_seconds = o.time_limit;
    cfg.branching_rule = milp::BranchingRule::PseudoCost;
    SolveOutcome out;
    out.sol = milp::solve_milp(p, cfg);
    switch (out.sol.status) {
        case milp::SolveStatus::Optimal:
        case milp::SolveStatus::GapLimit:
            out.exit_code = kExitOk;
            break;
        case milp::SolveStatus::Infeasible:
        case milp::SolveStatus::Unbounded:
            throw CliError{kExitInfeasible, p.name + ": " + to_string(out.sol.status)};
        default:
            out.exit_code = kExitLimit;
            break;
    }
    if (out.sol.values.empty())
        throw CliError{kExitLimit, p.name + ": limit hit before any feasible point was found"};
    out.sched = nexus::extract_schedule(out.sol, idx, s);
    return out;
}

json solver_stats_json(const milp::Solution& sol) {
    return json{{"status", to_string(sol.status)},
                {"objective", sol.objective},
                {"nodes", sol.stats.nodes},
                {"simplex_iterations", sol.stats.simplex_iterations},
                {"final_gap", sol.stats.final_gap},
                {"wall_seconds", sol.stats.wall_seconds}};
}

void write_manifest(const fs::path& dir, const CommonOpts& o, const std::string& mode,
                    bool pea_on, const std::vector<std::string>& artifacts, double wall_seconds,
                    const json& stats) {
    json man;
    man["scenario"] = scenario_label(o);
    man["mode"] = mode;
    man["pea"] = pea_on;
    man["solver"] = {{"gap", o.gap}, {"time_limit_seconds", o.time_limit}};
    man["output_directory"] = dir.string();
    man["artifacts"] = artifacts;
    man["wall_seconds"] = wall_seconds;
    man["solver_stats"] = stats;
    write_file(dir / "manifest.json", man.dump(2) + "\n");
}

int cmd_solve(const CommonOpts& o, const std::string& mode, const std::string& pea_flag) {
    bool pea_on = pea_flag == "on";
    Scenario s = load_valid_scenario(o);
    fs::path dir = resolve_out_dir(o);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> artifacts;
    json stats;
    int code = kExitOk;

    auto emit = [&](const std::string& name, const std::string& text) {
        write_file(dir / name, text);
        artifacts.push_back(name);
    };

    if (mode == "networked") {
        auto built = [&] {
            try {
                return nexus::build_networked(s);
            } catch (const std::invalid_argument& e) {
                throw CliError{kExitInvalidScenario, e.what()};
            }
        }();
        SolveOutcome r = run_solve(built.first, built.second, s, o);
        code = r.exit_code;
        stats = solver_stats_json(r.sol);

        nexus::Schedule final_sched = r.sched;
        if (pea_on) {
            auto ledger_p = pea::extract_ledger(r.sched, pea::Resource::Power);
            auto ledger_w = pea::extract_ledger(r.sched, pea::Resource::Water);
            std::vector<audit::CostBreakdown> before;
            for (size_t m = 0; m < s.mwens.size(); ++m)
                before.push_back(audit::mwen_cost(s, r.sched, static_cast<int>(m)));
            auto [mid, resp] = pea::apply_pea(r.sched, s, pea::Resource::Power);
            auto [post, resw] = pea::apply_pea(mid, s, pea::Resource::Water);
            final_sched = post;
            std::vector<audit::CostBreakdown> after;
            for (size_t m = 0; m < s.mwens.size(); ++m)
                after.push_back(audit::mwen_cost(s, post, static_cast<int>(m)));
            emit("ledger_power_pre.csv", ledger_csv(resp.before));
            emit("ledger_power_post.csv", ledger_csv(resp.after));
            emit("ledger_water_pre.csv", ledger_csv(resw.before));
            emit("ledger_water_post.csv", ledger_csv(resw.after));
            emit("pea_delta.csv", audit::to_csv(audit::pea_delta_report(before, after)));
        }
        for (size_t m = 0; m < final_sched.mwens.size(); ++m)
            emit("schedule_" + final_sched.mwens[m].name + ".csv",
                 schedule_csv(final_sched, m));
        {
            std::ostringstream net;
            net << "t,p+,p-\n";
            for (int t = 0; t < final_sched.horizon; ++t)
                net << t << ',' << fmt(final_sched.p_plus[static_cast<size_t>(t)]) << ','
                    << fmt(final_sched.p_minus[static_cast<size_t>(t)]) << '\n';
            emit("network.csv", net.str());
        }
        std::vector<audit::CostBreakdown> costs;
        for (size_t m = 0; m < s.mwens.size(); ++m)
            costs.push_back(audit::mwen_cost(s, final_sched, static_cast<int>(m)));
        emit("costs.csv", costs_csv(costs));
    } else {
        if (pea_on)
            throw CliError{kExitBadInput, "--pea on applies to networked mode only"};
        std::vector<audit::CostBreakdown> costs;
        json substats = json::array();
        for (int m = 0; m < static_cast<int>(s.mwens.size()); ++m) {
            auto built = nexus::build_separate(s, m);
            SolveOutcome r = run_solve(built.first, built.second, s, o);
            code = std::max(code, r.exit_code);
            substats.push_back(solver_stats_json(r.sol));
            emit("schedule_" + r.sched.mwens[0].name + ".csv", schedule_csv(r.sched, 0));
            costs.push_back(audit::mwen_cost(s, r.sched, 0));
        }
        stats = std::move(substats);
        emit("costs.csv", costs_csv(costs));
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    artifacts.push_back("manifest.json");
    write_manifest(dir, o, mode, pea_on, artifacts, wall, stats);
    std::cout << "wrote " << artifacts.size() << " artifacts to " << dir.string() << "\n";
    return code;
}

int cmd_compare(const CommonOpts& o) {
    Scenario s = load_valid_scenario(o);
    fs::path dir = resolve_out_dir(o);
    auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;

    auto built = [&] {
        try {
            return nexus::build_networked(s);
        } catch (const std::invalid_argument& e) {
            throw CliError{kExitInvalidScenario, e.what()};
        }
    }();
    SolveOutcome net = run_solve(built.first, built.second, s, o);
    code = std::max(code, net.exit_code);
    auto [mid, resp] = pea::apply_pea(net.sched, s, pea::Resource::Power);
    auto [post, resw] = pea::apply_pea(mid, s, pea::Resource::Water);
    std::vector<audit::CostBreakdown> networked;
    for (size_t m = 0; m < s.mwens.size(); ++m)
        networked.push_back(audit::mwen_cost(s, post, static_cast<int>(m)));

    std::vector<audit::CostBreakdown> separate;
    json substats = json::array();
    substats.push_back(solver_stats_json(net.sol));
    for (int m = 0; m < static_cast<int>(s.mwens.size()); ++m) {
        auto sep = nexus::build_separate(s, m);
        SolveOutcome r = run_solve(sep.first, sep.second, s, o);
        code = std::max(code, r.exit_code);
        substats.push_back(solver_stats_json(r.sol));
        separate.push_back(audit::mwen_cost(s, r.sched, 0));
    }

    audit::ComparisonTable table = audit::network_vs_separate_report(separate, networked);
    std::vector<std::string> artifacts = {"comparison.csv", "comparison.svg"};
    write_file(dir / "comparison.csv", audit::to_csv(table));
    write_file(dir / "comparison.svg", comparison_svg(table));

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    artifacts.push_back("manifest.json");
    write_manifest(dir, o, "compare", true, artifacts, wall, substats);
    const audit::ComparisonRow& total = table.rows.back();
    std::cout << "separate " << fmt(total.baseline) << " vs networked " << fmt(total.candidate)
              << " (" << fmt(total.percent) << "% reduction); artifacts in " << dir.string()
              << "\n";
    return code;
}

int cmd_export(const CommonOpts& o, const std::string& mode, int mwen) {
    Scenario s = load_valid_scenario(o);
    fs::path dir = resolve_out_dir(o);
    auto emit = [&](const std::string& name, const milp::MilpProblem& p) {
        write_file(dir / name, milp::export_mps(p).text);
        std::cout << "wrote " << (dir / name).string() << "\n";
    };
    if (mode == "networked") {
        try {
            emit("networked.mps", nexus::build_networked(s).first);
        } catch (const std::invalid_argument& e) {
            throw CliError{kExitInvalidScenario, e.what()};
        }
    } else {
        if (mwen >= static_cast<int>(s.mwens.size()))
            throw CliError{kExitBadInput, "no MWEN " + std::to_string(mwen)};
        int lo = mwen >= 0 ? mwen : 0;
        int hi = mwen >= 0 ? mwen + 1 : static_cast<int>(s.mwens.size());
        for (int m = lo; m < hi; ++m)
            emit("separate_m" + std::to_string(m) + ".mps", nexus::build_separate(s, m).first);
    }
    return kExitOk;
}

int cmd_validate(const CommonOpts& o) {
    Scenario s = load_scenario(o);
    auto report = validate_scenario(s);
    if (report.ok()) {
        std::cout << "ok: " << s.mwens.size() << " MWENs, " << s.horizon_periods
                  << " periods\n";
        return kExitOk;
    }
    for (const auto& v : report.violations)
        std::cerr << v.where << ": " << v.message << "\n";
    return kExitInvalidScenario;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-optimization toolkit for networked micro water-energy nexus systems"};
    app.require_subcommand(1);

    CommonOpts solve_o, compare_o, export_o, validate_o;
    std::string solve_mode = "networked", solve_pea = "off", export_mode = "networked";
    int export_mwen = -1;

    CLI::App* solve = app.add_subcommand("solve", "solve a scenario and write schedules");
    add_scenario_opts(solve, solve_o);
    add_out_opt(solve, solve_o);
    add_solver_opts(solve, solve_o);
    solve->add_option("--mode", solve_mode, "networked or separate")
        ->check(CLI::IsMember({"networked", "separate"}));
    solve->add_option("--pea", solve_pea, "apply the proportional exchange pass (on/off)")
        ->check(CLI::IsMember({"on", "off"}));

    CLI::App* compare = app.add_subcommand(
        "compare", "run networked (with PEA) and separate solves, report the delta");
    add_scenario_opts(compare, compare_o);
    add_out_opt(compare, compare_o);
    add_solver_opts(compare, compare_o);

    CLI::App* exp = app.add_subcommand("export", "write the model as an MPS file");
    add_scenario_opts(exp, export_o);
    add_out_opt(exp, export_o);
    exp->add_option("--mode", export_mode, "networked or separate")
        ->check(CLI::IsMember({"networked", "separate"}));
    exp->add_option("--mwen", export_mwen, "separate mode: export only this member");

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario");
    add_scenario_opts(validate, validate_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_o, solve_mode, solve_pea);
        if (compare->parsed()) return cmd_compare(compare_o);
        if (exp->parsed()) return cmd_export(export_o, export_mode, export_mwen);
        return cmd_validate(validate_o);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
