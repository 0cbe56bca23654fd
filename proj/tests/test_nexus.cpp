#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "wen/milp/branch_bound.hpp"
#include "wen/milp/mps.hpp"
#include "wen/milp/simplex.hpp"
#include "wen/nexus/model.hpp"

using namespace wen;
using namespace wen::nexus;
using milp::MilpProblem;
using milp::SolveStatus;

namespace {

// two small MWENs sized so that the default terminal targets equal the
// initial levels (peaks 200 kW / 100 gph against 50% initial fills)
Scenario tiny(std::vector<double> load1 = {150, 200, 120}, std::vector<double> load2 = {100, 200, 160},
              std::vector<double> wload1 = {80, 100, 60}, std::vector<double> wload2 = {50, 100, 90},
              std::vector<double> buy = {0.30, 0.25, 0.35}) {
    const int T = 3;
    Scenario s;
    s.horizon_periods = T;
    s.dt_hours = 1.0;
    s.grid.buy_price = buy;
    s.grid.sell_price = buy;
    for (double& x : s.grid.sell_price) x *= 0.6;
    s.grid.tie_limit_kw = 600;
    s.water_main.import_price = Series(T, 0.006);
    s.water_main.tie_limit_gph = 400;
    s.network_prices.power.resize(T);
    for (int t = 0; t < T; ++t)
        s.network_prices.power[t] = 0.5 * (s.grid.buy_price[t] + s.grid.sell_price[t]);
    s.network_prices.water = Series(T, 0.003);

    auto mk = [&](const std::string& name, Series pl, Series wl) {
        MwenSpec m;
        m.name = name;
        m.tie_line_power_kw = 300;
        m.tie_line_water_gph = 200;
        GeneratorSpec g;
        g.p_min_kw = 20;
        g.p_max_kw = 150;
        g.cost_per_kwh = 0.2;
        g.no_load_per_h = 1.0;
        g.startup_cost = 2.0;
        m.generators.push_back(g);
        StorageSpec st;
        st.kind = StorageKind::Battery;
        st.rate_limit_kw = 100;
        st.level_max_kwh = 200;
        st.eta_charge = 0.9;
        st.eta_discharge = 0.9;
        st.initial_level_kwh = 100;
        m.storages.push_back(st);
        WastewaterSpec ww;
        ww.out_max_gph = 50;
        ww.reservoir_cap_gal = 2000;
        ww.initial_reservoir_gal = 500;
        ww.gal_per_kwh = 10;
        ww.no_load_per_h = 0.5;
        m.wastewater = ww;
        TreatmentSpec wt;
        wt.out_max_gph = 50;
        wt.gal_per_kwh = 10;
        wt.no_load_per_h = 0.5;
        m.treatment = wt;
        TankSpec tk;
        tk.rate_limit_gph = 100;
        tk.cap_gal = 100;
        tk.initial_level_gal = 50;
        m.tanks.push_back(tk);
        m.profiles.power_load_kw = std::move(pl);
        m.profiles.water_load_gph = std::move(wl);
        m.profiles.solar_kw = Series(T, 0.0);
        m.profiles.wind_kw = Series(T, 0.0);
        return m;
    };
    s.mwens.push_back(mk("a", std::move(load1), std::move(wload1)));
    s.mwens.push_back(mk("b", std::move(load2), std::move(wload2)));
    return s;
}

std::map<std::string, int> row_families(const MilpProblem& p) {
    std::map<std::string, int> fam;
    for (const auto& c : p.constraints()) fam[c.name.substr(0, c.name.find('['))]++;
    return fam;
}

}  // namespace

TEST_CASE("pump_power evaluates the linear coupling") {
    PumpSpec pump;  // alpha 0.002, eta 0.8
    CHECK(pump_power(pump, 900) == doctest::Approx(2.25));
    CHECK(pump_power(pump, 0) == 0.0);
    CHECK(pump_power(pump, 500) * 2 == doctest::Approx(pump_power(pump, 1000)));
}

TEST_CASE("variable counts match the closed form") {
    Scenario s = builtin_case_study();
    auto [net, idx] = build_networked(s);
    CHECK(net.num_variables() == expected_variable_count(s, Mode::Networked));
    long sum = 0;
    for (int m = 0; m < 4; ++m) {
        auto [sep, sidx] = build_separate(s, m);
        CHECK(sep.num_variables() == expected_variable_count(s, Mode::Separate, m));
        sum += sep.num_variables();
    }
    CHECK(sum < net.num_variables());

    Scenario t = tiny();
    auto [tp, tidx] = build_networked(t);
    CHECK(tp.num_variables() == expected_variable_count(t, Mode::Networked));
}

TEST_CASE("coverage: every constraint family is emitted on the bundled scenario") {
    Scenario s = builtin_case_study();
    auto [p, idx] = build_networked(s);
    auto fam = row_families(p);
    for (const char* f :
         {"eq04lo", "eq04up", "eq05", "eq06", "eq07", "eq08", "eq09", "eq11", "eq12", "eq13",
          "eq14", "eq16", "eq17", "eq18", "eq19", "eq20lo", "eq20up", "eq21", "eq23", "eq24lo",
          "eq24up", "eq25", "eq26", "eq27", "eq28", "eq29", "eq31", "eq32", "eq34", "eq35",
          "eq36ww", "eq36wt", "eq36st", "endES", "endST", "endRWW"}) {
        INFO(f);
        CHECK(fam[f] > 0);
    }
    // one network power and water balance row per period
    CHECK(fam["eq16"] == 24);
    CHECK(fam["eq34"] == 24);
    // families carried as variable bounds: storage level (EL), exchange caps
    // (PE, WE), reservoir and tank levels all have finite box bounds
    for (const char* prefix : {"EL[", "PE[", "WE[", "WLrWW[", "WLST["}) {
        int seen = 0;
        for (const auto& v : p.variables())
            if (v.name.rfind(prefix, 0) == 0) {
                ++seen;
                CHECK(std::isfinite(v.lower));
                CHECK(std::isfinite(v.upper));
            }
        INFO(prefix);
        CHECK(seen > 0);
    }
}

TEST_CASE("MWEN 1 aggregate generator is gated by its published minimum") {
    Scenario s = builtin_case_study();
    auto [p, idx] = build_networked(s);
    bool found = false;
    for (const auto& c : p.constraints()) {
        if (c.name != "eq04lo[m=0,g=0,t=7]") continue;
        found = true;
        REQUIRE(c.terms.size() == 2);
        double umin = 0;
        for (const auto& [v, coef] : c.terms)
            if (p.variables()[v].type == milp::VarType::Binary) umin = coef;
        CHECK(umin == -1450.0);
    }
    CHECK(found);
}

TEST_CASE("battery storages emit no water-draw rows") {
    Scenario s = builtin_case_study();
    auto [p, idx] = build_networked(s);
    auto fam = row_families(p);
    CHECK(fam["eq11"] == 2 * 24);  // only the two hydrogen units
    CHECK(idx.mwens[1].wes[0][0] == -1);
    CHECK(idx.mwens[0].wes[0][0] >= 0);
}

TEST_CASE("separate MWEN 4 drops generators and treatment") {
    Scenario s = builtin_case_study();
    auto [p, idx] = build_separate(s, 3);
    CHECK(idx.mwens[0].pg.empty());
    auto fam = row_families(p);
    CHECK(fam["eq04lo"] == 0);
    CHECK(fam["eq24lo"] == 0);
    CHECK(fam["eq25"] == 0);
    CHECK(fam["eq17"] == 24);  // per-member one-sidedness binaries replace the aggregate
    CHECK(fam["eq16"] == 0);
    CHECK(fam["eq34"] == 0);
    for (const auto& v : idx.mwens[0].wn) CHECK(v == -1);
}

TEST_CASE("builders are deterministic") {
    Scenario s = tiny();
    auto a = milp::export_mps(build_networked(s).first).text;
    auto b = milp::export_mps(build_networked(s).first).text;
    CHECK(a == b);
}

TEST_CASE("builders reject invalid scenarios and unknown selectors") {
    Scenario s = tiny();
    CHECK_THROWS_AS(build_separate(s, 7), std::invalid_argument);
    Scenario one = tiny();
    one.mwens.pop_back();
    CHECK_THROWS_AS(build_networked(one), std::invalid_argument);
    Scenario bad = tiny();
    bad.mwens[0].storages[0].eta_charge = 2.0;
    CHECK_THROWS_AS(build_networked(bad), std::invalid_argument);
}

TEST_CASE("separate solve round-trips through extract_schedule") {
    Scenario s = tiny();
    auto [p, idx] = build_separate(s, 0);
    milp::SolverConfig cfg;
    cfg.relative_mip_gap = 1e-8;
    auto sol = milp::solve_milp(p, cfg);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(p.is_feasible(sol.values, 1e-6));
    Schedule sched = extract_schedule(sol, idx, s);
    CHECK(sched.mode == Mode::Separate);
    CHECK(sched.mwen_ids == std::vector<int>{0});
    CHECK(sched.objective == sol.objective);
    for (int t = 0; t < 3; ++t) {
        double u = sched.mwens[0].ug[0][t];
        CHECK((u == 0.0 || u == 1.0));
        // power balance (12)-(13) residual of the extracted point
        double lhs = sched.mwens[0].pg[0][t] + sched.mwens[0].pesd[0][t] -
                     sched.mwens[0].pesc[0][t] + sched.mwens[0].pgrid_imp[t] -
                     sched.mwens[0].pgrid_exp[t];
        double rhs = s.mwens[0].profiles.power_load_kw[t] + sched.mwens[0].pww[t] +
                     sched.mwens[0].pww_pump[t] + sched.mwens[0].pwt[t] +
                     sched.mwens[0].pwt_pump[t] + sched.mwens[0].pst_pump[0][t];
        CHECK(std::abs(lhs - rhs) <= 1e-6);
    }
}

TEST_CASE("extract_schedule refuses a solution without an incumbent") {
    Scenario s = tiny();
    auto [p, idx] = build_separate(s, 0);
    milp::Solution none;
    none.status = SolveStatus::Infeasible;
    CHECK_THROWS_AS(extract_schedule(none, idx, s), std::runtime_error);
}

TEST_CASE("LP relaxation bounds the MILP from below") {
    Scenario s = tiny();
    auto [p, idx] = build_networked(s);
    auto lp = milp::solve_lp(p);
    milp::SolverConfig cfg;
    cfg.relative_mip_gap = 1e-8;
    auto mip = milp::solve_milp(p, cfg);
    REQUIRE(lp.status == SolveStatus::Optimal);
    REQUIRE(mip.status == SolveStatus::Optimal);
    CHECK(lp.objective <= mip.objective + 1e-6);
}

TEST_CASE("networked optimum is invariant to admissible network prices") {
    Scenario s = tiny();
    milp::SolverConfig cfg;
    cfg.relative_mip_gap = 1e-9;
    auto sol1 = milp::solve_milp(build_networked(s).first, cfg);
    for (int t = 0; t < s.horizon_periods; ++t)
        s.network_prices.power[t] = 0.7 * s.grid.buy_price[t] + 0.3 * s.grid.sell_price[t];
    s.network_prices.water = Series(s.horizon_periods, 0.005);
    REQUIRE(validate_scenario(s).ok());
    auto sol2 = milp::solve_milp(build_networked(s).first, cfg);
    REQUIRE(sol1.status == SolveStatus::Optimal);
    REQUIRE(sol2.status == SolveStatus::Optimal);
    double rel = std::abs(sol1.objective - sol2.objective) /
                 std::max(1.0, std::abs(sol1.objective));
    CHECK(rel < 1e-6);
}

TEST_CASE("embedding: networked never beats the sum of separate optima backwards") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> L(50, 199), W(20, 99), B(0.1, 0.5);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> l1(3), l2(3), w1(3), w2(3), buy(3);
        for (int t = 0; t < 3; ++t) {
            l1[t] = L(rng);
            l2[t] = L(rng);
            w1[t] = W(rng);
            w2[t] = W(rng);
            buy[t] = B(rng);
        }
        // pin the peaks the terminal targets are derived from
        l1[1] = l2[1] = 200;
        w1[1] = w2[1] = 100;
        Scenario s = tiny(l1, l2, w1, w2, buy);
        REQUIRE(validate_scenario(s).ok());
        milp::SolverConfig cfg;
        cfg.relative_mip_gap = 1e-8;
        auto net = milp::solve_milp(build_networked(s).first, cfg);
        auto s0 = milp::solve_milp(build_separate(s, 0).first, cfg);
        auto s1 = milp::solve_milp(build_separate(s, 1).first, cfg);
        REQUIRE(net.status == SolveStatus::Optimal);
        REQUIRE(s0.status == SolveStatus::Optimal);
        REQUIRE(s1.status == SolveStatus::Optimal);
        CHECK(net.objective <= s0.objective + s1.objective + 1e-5);
    }
}
