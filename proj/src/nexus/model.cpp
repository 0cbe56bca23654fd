#include "wen/nexus/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wen::nexus {

using milp::kInf;
using milp::MilpProblem;
using milp::Sense;
using milp::VarType;

double pump_power(const PumpSpec& pump, double flow) {
    return pump.alpha_kwh_per_gal * flow / pump.eta;
}

namespace {

std::string tag(int m, int t) {
    return "[m=" + std::to_string(m) + ",t=" + std::to_string(t) + "]";
}
std::string tag(int m, const char* k, int a, int t) {
    return "[m=" + std::to_string(m) + "," + k + "=" + std::to_string(a) +
           ",t=" + std::to_string(t) + "]";
}

struct Builder {
    const Scenario& s;
    Mode mode;
    MilpProblem p;
    VariableIndex idx;
    double dt;
    int T;

    Builder(const Scenario& sc, Mode md) : s(sc), mode(md) {
        dt = s.dt_hours;
        T = s.horizon_periods;
        idx.mode = md;
        idx.horizon = T;
    }

    int var(const std::string& name, double lo, double hi, VarType ty = VarType::Continuous) {
        return p.add_variable(name, lo, hi, ty);
    }

    // one MWEN's variables, local constraints and objective terms
    void add_mwen(int m) {
        const MwenSpec& w = s.mwens[static_cast<size_t>(m)];
        MwenVars v;
        const bool net = mode == Mode::Networked;
        const double grid_cap = net ? s.grid.tie_limit_kw : w.tie_line_power_kw;
        const double main_cap = net ? s.water_main.tie_limit_gph : w.tie_line_water_gph;

        // generators, eq (4)-(5)
        int G = static_cast<int>(w.generators.size());
        v.pg.resize(static_cast<size_t>(G));
        v.ug.resize(static_cast<size_t>(G));
        v.vg.resize(static_cast<size_t>(G));
        for (int g = 0; g < G; ++g) {
            const GeneratorSpec& gen = w.generators[static_cast<size_t>(g)];
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, "g", g, t);
                int pg = var("PG" + at, 0, gen.p_max_kw);
                int ug = var("uG" + at, 0, 1, VarType::Binary);
                int vg = var("vG" + at, 0, 1);
                v.pg[static_cast<size_t>(g)].push_back(pg);
                v.ug[static_cast<size_t>(g)].push_back(ug);
                v.vg[static_cast<size_t>(g)].push_back(vg);
                p.add_constraint("eq04lo" + at, {{pg, 1.0}, {ug, -gen.p_min_kw}},
                                 Sense::GreaterEqual, 0.0);
                p.add_constraint("eq04up" + at, {{pg, 1.0}, {ug, -gen.p_max_kw}},
                                 Sense::LessEqual, 0.0);
                if (t == 0)
                    p.add_constraint("eq05" + at, {{vg, -1.0}, {ug, 1.0}}, Sense::LessEqual,
                                     gen.initial_on ? 1.0 : 0.0);
                else
                    p.add_constraint(
                        "eq05" + at,
                        {{vg, -1.0}, {ug, 1.0}, {v.ug[static_cast<size_t>(g)][static_cast<size_t>(t - 1)], -1.0}},
                        Sense::LessEqual, 0.0);
                p.set_objective_coeff(vg, gen.startup_cost);
                p.set_objective_coeff(ug, dt * gen.no_load_per_h);
                p.set_objective_coeff(pg, dt * gen.cost_per_kwh);
            }
        }

        // storages, eq (6)-(11); (10) carried as EL variable bounds
        int B = static_cast<int>(w.storages.size());
        v.pesc.resize(static_cast<size_t>(B));
        v.pesd.resize(static_cast<size_t>(B));
        v.eesc.resize(static_cast<size_t>(B));
        v.eesd.resize(static_cast<size_t>(B));
        v.el.resize(static_cast<size_t>(B));
        v.wes.resize(static_cast<size_t>(B));
        for (int b = 0; b < B; ++b) {
            const StorageSpec& st = w.storages[static_cast<size_t>(b)];
            bool hydrogen = st.kind == StorageKind::Hydrogen;
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, "b", b, t);
                int pc = var("PESc" + at, 0, st.rate_limit_kw);
                int pd = var("PESd" + at, 0, st.rate_limit_kw);
                int ec = var("eESc" + at, 0, 1, VarType::Binary);
                int ed = var("eESd" + at, 0, 1, VarType::Binary);
                int el = var("EL" + at, st.level_min_kwh, st.level_max_kwh);
                int we = hydrogen
                             ? var("WES" + at, 0, st.water_per_kwh_charged * st.rate_limit_kw)
                             : -1;
                v.pesc[static_cast<size_t>(b)].push_back(pc);
                v.pesd[static_cast<size_t>(b)].push_back(pd);
                v.eesc[static_cast<size_t>(b)].push_back(ec);
                v.eesd[static_cast<size_t>(b)].push_back(ed);
                v.el[static_cast<size_t>(b)].push_back(el);
                v.wes[static_cast<size_t>(b)].push_back(we);
                p.add_constraint("eq06" + at, {{pc, 1.0}, {ec, -st.rate_limit_kw}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq07" + at, {{pd, 1.0}, {ed, -st.rate_limit_kw}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq08" + at, {{ec, 1.0}, {ed, 1.0}}, Sense::LessEqual, 1.0);
                std::vector<std::pair<int, double>> dyn = {
                    {el, 1.0}, {pc, -dt * st.eta_charge}, {pd, dt / st.eta_discharge}};
                double rhs = 0.0;
                if (t == 0)
                    rhs = st.initial_level_kwh;
                else
                    dyn.push_back({v.el[static_cast<size_t>(b)][static_cast<size_t>(t - 1)], -1.0});
                p.add_constraint("eq09" + at, dyn, Sense::Equal, rhs);
                if (hydrogen)
                    p.add_constraint("eq11" + at, {{we, 1.0}, {pc, -st.water_per_kwh_charged}},
                                     Sense::Equal, 0.0);
            }
        }

        // per-period power exchange variables
        for (int t = 0; t < T; ++t) {
            std::string at = tag(m, t);
            v.pgrid_imp.push_back(var("Pgrid+" + at, 0, grid_cap));
            v.pgrid_exp.push_back(var("Pgrid-" + at, 0, grid_cap));
            v.pn.push_back(net ? var("PN" + at, -(w.tie_line_power_kw + grid_cap),
                                     w.tie_line_power_kw + grid_cap)
                               : -1);
            // (15) carried as PE variable bounds
            v.pe.push_back(var("PE" + at, -w.tie_line_power_kw, w.tie_line_power_kw));
            v.pnet.push_back(var("Pnet" + at, -kInf, kInf));
            p.set_objective_coeff(v.pgrid_imp.back(), dt * s.grid.buy_price[static_cast<size_t>(t)]);
            p.set_objective_coeff(v.pgrid_exp.back(), -dt * s.grid.sell_price[static_cast<size_t>(t)]);
            if (net)
                p.set_objective_coeff(v.pn.back(), dt * s.network_prices.power[static_cast<size_t>(t)]);
        }

        // wastewater unit, eq (20)-(23); (22) carried as WLrWW variable bounds
        if (w.wastewater) {
            const WastewaterSpec& ww = *w.wastewater;
            double pmax = ww.out_max_gph / ww.gal_per_kwh;
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, t);
                int wf = var("WWW" + at, 0, ww.out_max_gph);
                int u = var("uWW" + at, 0, 1, VarType::Binary);
                int wl = var("WLrWW" + at, 0, ww.reservoir_cap_gal);
                int pw = var("PWW" + at, 0, pmax);
                int pp = var("PWWpump" + at, 0, pump_power(ww.pump, ww.out_max_gph));
                v.www.push_back(wf);
                v.uww.push_back(u);
                v.wlrww.push_back(wl);
                v.pww.push_back(pw);
                v.pww_pump.push_back(pp);
                p.add_constraint("eq20lo" + at, {{wf, 1.0}, {u, -ww.out_min_gph}},
                                 Sense::GreaterEqual, 0.0);
                p.add_constraint("eq20up" + at, {{wf, 1.0}, {u, -ww.out_max_gph}},
                                 Sense::LessEqual, 0.0);
                // reservoir inflow is a constant: recovery x previous-period demand
                double inflow =
                    ww.recovery_fraction *
                    w.profiles.water_load_gph[static_cast<size_t>(t == 0 ? 0 : t - 1)];
                std::vector<std::pair<int, double>> dyn = {{wl, 1.0}, {wf, dt}};
                double rhs = dt * inflow;
                if (t == 0)
                    rhs += ww.initial_reservoir_gal;
                else
                    dyn.push_back({v.wlrww[static_cast<size_t>(t - 1)], -1.0});
                p.add_constraint("eq21" + at, dyn, Sense::Equal, rhs);
                p.add_constraint("eq23" + at, {{wf, 1.0}, {pw, -ww.gal_per_kwh}}, Sense::Equal,
                                 0.0);
                p.add_constraint("eq36ww" + at,
                                 {{pp, ww.pump.eta}, {wf, -ww.pump.alpha_kwh_per_gal}},
                                 Sense::Equal, 0.0);
                p.set_objective_coeff(u, dt * ww.no_load_per_h);
            }
        }

        // regular treatment, eq (24)-(25)
        if (w.treatment) {
            const TreatmentSpec& wt = *w.treatment;
            double pmax = wt.out_max_gph / wt.gal_per_kwh;
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, t);
                int wf = var("WWT" + at, 0, wt.out_max_gph);
                int u = var("uWT" + at, 0, 1, VarType::Binary);
                int pw = var("PWT" + at, 0, pmax);
                int pp = var("PWTpump" + at, 0, pump_power(wt.pump, wt.out_max_gph));
                v.wwt.push_back(wf);
                v.uwt.push_back(u);
                v.pwt.push_back(pw);
                v.pwt_pump.push_back(pp);
                p.add_constraint("eq24lo" + at, {{wf, 1.0}, {u, -wt.out_min_gph}},
                                 Sense::GreaterEqual, 0.0);
                p.add_constraint("eq24up" + at, {{wf, 1.0}, {u, -wt.out_max_gph}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq25" + at, {{wf, 1.0}, {pw, -wt.gal_per_kwh}}, Sense::Equal,
                                 0.0);
                p.add_constraint("eq36wt" + at,
                                 {{pp, wt.pump.eta}, {wf, -wt.pump.alpha_kwh_per_gal}},
                                 Sense::Equal, 0.0);
                p.set_objective_coeff(u, dt * wt.no_load_per_h);
            }
        }

        // storage tanks, eq (26)-(30); (30) carried as WLST variable bounds
        int K = static_cast<int>(w.tanks.size());
        v.wstc.resize(static_cast<size_t>(K));
        v.wstd.resize(static_cast<size_t>(K));
        v.sp.resize(static_cast<size_t>(K));
        v.sv.resize(static_cast<size_t>(K));
        v.wlst.resize(static_cast<size_t>(K));
        v.pst_pump.resize(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) {
            const TankSpec& tk = w.tanks[static_cast<size_t>(k)];
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, "k", k, t);
                int wc = var("WSTc" + at, 0, tk.rate_limit_gph);
                int wd = var("WSTd" + at, 0, tk.rate_limit_gph);
                int sp = var("spST" + at, 0, 1, VarType::Binary);
                int sv = var("svST" + at, 0, 1, VarType::Binary);
                int wl = var("WLST" + at, 0, tk.cap_gal);
                int pp = var("PSTpump" + at, 0, pump_power(tk.pump, tk.rate_limit_gph));
                v.wstc[static_cast<size_t>(k)].push_back(wc);
                v.wstd[static_cast<size_t>(k)].push_back(wd);
                v.sp[static_cast<size_t>(k)].push_back(sp);
                v.sv[static_cast<size_t>(k)].push_back(sv);
                v.wlst[static_cast<size_t>(k)].push_back(wl);
                v.pst_pump[static_cast<size_t>(k)].push_back(pp);
                p.add_constraint("eq26" + at, {{wc, 1.0}, {sp, -tk.rate_limit_gph}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq27" + at, {{wd, 1.0}, {sv, -tk.rate_limit_gph}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq28" + at, {{sp, 1.0}, {sv, 1.0}}, Sense::LessEqual, 1.0);
                std::vector<std::pair<int, double>> dyn = {{wl, 1.0}, {wc, -dt}, {wd, dt}};
                double rhs = 0.0;
                if (t == 0)
                    rhs = tk.initial_level_gal;
                else
                    dyn.push_back({v.wlst[static_cast<size_t>(k)][static_cast<size_t>(t - 1)], -1.0});
                p.add_constraint("eq29" + at, dyn, Sense::Equal, rhs);
                // fill pump only; releases are valve-driven
                p.add_constraint("eq36st" + at,
                                 {{pp, tk.pump.eta}, {wc, -tk.pump.alpha_kwh_per_gal}},
                                 Sense::Equal, 0.0);
            }
        }

        // per-period water exchange variables
        for (int t = 0; t < T; ++t) {
            std::string at = tag(m, t);
            v.wmain.push_back(var("Wmain+" + at, 0, main_cap));
            v.wn.push_back(net ? var("WN" + at, -(w.tie_line_water_gph + main_cap),
                                     w.tie_line_water_gph + main_cap)
                               : -1);
            // (33) carried as WE variable bounds
            v.we.push_back(var("WE" + at, -w.tie_line_water_gph, w.tie_line_water_gph));
            p.set_objective_coeff(v.wmain.back(),
                                  dt * s.water_main.import_price[static_cast<size_t>(t)]);
            if (net)
                p.set_objective_coeff(v.wn.back(),
                                      dt * s.network_prices.water[static_cast<size_t>(t)]);
        }

        // balances (12)-(14), (31)-(32)
        for (int t = 0; t < T; ++t) {
            std::string at = tag(m, t);
            size_t ut = static_cast<size_t>(t);

            std::vector<std::pair<int, double>> bal;
            for (int g = 0; g < G; ++g) bal.push_back({v.pg[static_cast<size_t>(g)][ut], 1.0});
            for (int b = 0; b < B; ++b) {
                bal.push_back({v.pesd[static_cast<size_t>(b)][ut], 1.0});
                bal.push_back({v.pesc[static_cast<size_t>(b)][ut], -1.0});
            }
            bal.push_back({v.pgrid_imp[ut], 1.0});
            bal.push_back({v.pgrid_exp[ut], -1.0});
            if (net) bal.push_back({v.pn[ut], 1.0});
            bal.push_back({v.pnet[ut], -1.0});
            p.add_constraint("eq12" + at, bal, Sense::Equal, 0.0);

            std::vector<std::pair<int, double>> netload = {{v.pnet[ut], 1.0}};
            if (w.wastewater) {
                netload.push_back({v.pww[ut], -1.0});
                netload.push_back({v.pww_pump[ut], -1.0});
            }
            if (w.treatment) {
                netload.push_back({v.pwt[ut], -1.0});
                netload.push_back({v.pwt_pump[ut], -1.0});
            }
            for (int k = 0; k < K; ++k) netload.push_back({v.pst_pump[static_cast<size_t>(k)][ut], -1.0});
            double fixed = w.profiles.power_load_kw[ut] - w.profiles.solar_kw[ut] -
                           w.profiles.wind_kw[ut];
            p.add_constraint("eq13" + at, netload, Sense::Equal, fixed);

            std::vector<std::pair<int, double>> exch = {
                {v.pe[ut], 1.0}, {v.pgrid_imp[ut], -1.0}, {v.pgrid_exp[ut], 1.0}};
            if (net) exch.push_back({v.pn[ut], -1.0});
            p.add_constraint("eq14" + at, exch, Sense::Equal, 0.0);

            std::vector<std::pair<int, double>> wbal;
            if (w.wastewater) wbal.push_back({v.www[ut], 1.0});
            if (w.treatment) wbal.push_back({v.wwt[ut], 1.0});
            for (int k = 0; k < K; ++k) {
                wbal.push_back({v.wstd[static_cast<size_t>(k)][ut], 1.0});
                wbal.push_back({v.wstc[static_cast<size_t>(k)][ut], -1.0});
            }
            wbal.push_back({v.wmain[ut], 1.0});
            if (net) wbal.push_back({v.wn[ut], 1.0});
            for (int b = 0; b < B; ++b)
                if (v.wes[static_cast<size_t>(b)][ut] >= 0)
                    wbal.push_back({v.wes[static_cast<size_t>(b)][ut], -1.0});
            p.add_constraint("eq31" + at, wbal, Sense::Equal, w.profiles.water_load_gph[ut]);

            std::vector<std::pair<int, double>> wexch = {{v.we[ut], 1.0}, {v.wmain[ut], -1.0}};
            if (net) wexch.push_back({v.wn[ut], -1.0});
            p.add_constraint("eq32" + at, wexch, Sense::Equal, 0.0);
        }

        // grid / main one-sidedness, aggregate in networked mode (emitted in
        // add_coupling there), per member here
        if (!net) {
            for (int t = 0; t < T; ++t) {
                std::string at = tag(m, t);
                size_t ut = static_cast<size_t>(t);
                int pp = var("p+" + at, 0, 1, VarType::Binary);
                int pm = var("p-" + at, 0, 1, VarType::Binary);
                idx.p_plus.push_back(pp);
                idx.p_minus.push_back(pm);
                p.add_constraint("eq17" + at, {{v.pgrid_imp[ut], 1.0}, {pp, -grid_cap}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq18" + at, {{v.pgrid_exp[ut], 1.0}, {pm, -grid_cap}},
                                 Sense::LessEqual, 0.0);
                p.add_constraint("eq19" + at, {{pp, 1.0}, {pm, 1.0}}, Sense::LessEqual, 1.0);
                p.add_constraint("eq35" + at, {{v.wmain[ut], 1.0}}, Sense::LessEqual, main_cap);
            }
        }

        // terminal policy rows
        Sense endsense = s.policies.terminal_sense_storage == TerminalSense::Equality
                             ? Sense::Equal
                             : Sense::GreaterEqual;
        double peak_p = 0, peak_w = 0;
        for (double x : w.profiles.power_load_kw) peak_p = std::max(peak_p, x);
        for (double x : w.profiles.water_load_gph) peak_w = std::max(peak_w, x);
        for (int b = 0; b < B; ++b) {
            const StorageSpec& st = w.storages[static_cast<size_t>(b)];
            double target = std::clamp(s.policies.final_energy_fraction * peak_p * dt,
                                       st.level_min_kwh, st.level_max_kwh);
            p.add_constraint("endES[m=" + std::to_string(m) + ",b=" + std::to_string(b) + "]",
                             {{v.el[static_cast<size_t>(b)].back(), 1.0}}, endsense, target);
        }
        for (int k = 0; k < K; ++k) {
            const TankSpec& tk = w.tanks[static_cast<size_t>(k)];
            double target =
                std::clamp(s.policies.final_water_fraction * peak_w * dt, 0.0, tk.cap_gal);
            p.add_constraint("endST[m=" + std::to_string(m) + ",k=" + std::to_string(k) + "]",
                             {{v.wlst[static_cast<size_t>(k)].back(), 1.0}}, endsense, target);
        }
        if (w.wastewater)
            p.add_constraint(
                "endRWW[m=" + std::to_string(m) + "]", {{v.wlrww.back(), 1.0}}, Sense::LessEqual,
                s.policies.final_wastewater_fraction * w.wastewater->reservoir_cap_gal);

        idx.mwen_ids.push_back(m);
        idx.mwens.push_back(std::move(v));
    }

    // network-wide coupling rows (16)-(19), (34)-(35)
    void add_coupling() {
        for (int t = 0; t < T; ++t) {
            std::string at = "[t=" + std::to_string(t) + "]";
            size_t ut = static_cast<size_t>(t);
            int pp = var("p+" + at, 0, 1, VarType::Binary);
            int pm = var("p-" + at, 0, 1, VarType::Binary);
            idx.p_plus.push_back(pp);
            idx.p_minus.push_back(pm);

            std::vector<std::pair<int, double>> netp, imp, exp_, netw, main;
            for (const MwenVars& v : idx.mwens) {
                netp.push_back({v.pn[ut], 1.0});
                imp.push_back({v.pgrid_imp[ut], 1.0});
                exp_.push_back({v.pgrid_exp[ut], 1.0});
                netw.push_back({v.wn[ut], 1.0});
                main.push_back({v.wmain[ut], 1.0});
            }
            p.add_constraint("eq16" + at, netp, Sense::Equal, 0.0);
            imp.push_back({pp, -s.grid.tie_limit_kw});
            p.add_constraint("eq17" + at, imp, Sense::LessEqual, 0.0);
            exp_.push_back({pm, -s.grid.tie_limit_kw});
            p.add_constraint("eq18" + at, exp_, Sense::LessEqual, 0.0);
            p.add_constraint("eq19" + at, {{pp, 1.0}, {pm, 1.0}}, Sense::LessEqual, 1.0);
            p.add_constraint("eq34" + at, netw, Sense::Equal, 0.0);
            p.add_constraint("eq35" + at, main, Sense::LessEqual, s.water_main.tie_limit_gph);
        }
    }
};

void require_valid(const Scenario& s) {
    auto report = validate_scenario(s);
    if (!report.ok())
        throw std::invalid_argument("scenario invalid: " + report.violations[0].where + ": " +
                                    report.violations[0].message);
}

}  // namespace

long expected_variable_count(const Scenario& s, Mode mode, int only_mwen) {
    long per_t = 0;
    for (size_t m = 0; m < s.mwens.size(); ++m) {
        if (mode == Mode::Separate && static_cast<int>(m) != only_mwen) continue;
        const MwenSpec& w = s.mwens[m];
        long hyd = 0;
        for (const StorageSpec& st : w.storages)
            if (st.kind == StorageKind::Hydrogen) ++hyd;
        long c = 3 * static_cast<long>(w.generators.size()) +
                 5 * static_cast<long>(w.storages.size()) + hyd +
                 6 * static_cast<long>(w.tanks.size()) + (w.wastewater ? 5 : 0) +
                 (w.treatment ? 4 : 0);
        // power exchange block: Pgrid+/-, PE, Pnet (+PN networked)
        // water exchange block: Wmain+, WE (+WN networked)
        c += mode == Mode::Networked ? 5 + 3 : 4 + 2 + 2;  // separate adds per-member p+/p-
        per_t += c;
    }
    if (mode == Mode::Networked) per_t += 2;  // aggregate p+/p-
    return per_t * s.horizon_periods;
}

std::pair<MilpProblem, VariableIndex> build_networked(const Scenario& s) {
    require_valid(s);
    if (s.mwens.size() < 2)
        throw std::invalid_argument("networked mode needs at least 2 MWENs");
    Builder b(s, Mode::Networked);
    b.p.name = "networked";
    for (int m = 0; m < static_cast<int>(s.mwens.size()); ++m) b.add_mwen(m);
    b.add_coupling();
    return {std::move(b.p), std::move(b.idx)};
}

std::pair<MilpProblem, VariableIndex> build_separate(const Scenario& s, int mwen) {
    require_valid(s);
    if (mwen < 0 || mwen >= static_cast<int>(s.mwens.size()))
        throw std::invalid_argument("unknown MWEN selector " + std::to_string(mwen));
    Builder b(s, Mode::Separate);
    b.p.name = "separate_m" + std::to_string(mwen);
    b.add_mwen(mwen);
    return {std::move(b.p), std::move(b.idx)};
}

namespace {

double rounded(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

std::vector<double> take(const std::vector<int>& ids, const std::vector<double>& x, bool binary) {
    std::vector<double> out;
    out.reserve(ids.size());
    for (int i : ids) {
        if (i < 0) {
            out.push_back(0.0);
            continue;
        }
        double v = x[static_cast<size_t>(i)];
        out.push_back(binary ? std::round(v) : rounded(v));
    }
    return out;
}

std::vector<std::vector<double>> take2(const std::vector<std::vector<int>>& ids,
                                       const std::vector<double>& x, bool binary) {
    std::vector<std::vector<double>> out;
    out.reserve(ids.size());
    for (const auto& row : ids) out.push_back(take(row, x, binary));
    return out;
}

}  // namespace

Schedule extract_schedule(const milp::Solution& sol, const VariableIndex& idx, const Scenario& s) {
    using milp::SolveStatus;
    bool has_point = !sol.values.empty() &&
                     (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::GapLimit ||
                      sol.status == SolveStatus::NodeLimit || sol.status == SolveStatus::TimeLimit);
    if (!has_point) throw std::runtime_error("no incumbent to extract (" + to_string(sol.status) + ")");

    Schedule out;
    out.mode = idx.mode;
    out.horizon = idx.horizon;
    out.objective = sol.objective;
    out.mwen_ids = idx.mwen_ids;
    const std::vector<double>& x = sol.values;
    for (size_t i = 0; i < idx.mwens.size(); ++i) {
        const MwenVars& v = idx.mwens[i];
        MwenSchedule ms;
        ms.name = s.mwens[static_cast<size_t>(idx.mwen_ids[i])].name;
        ms.pg = take2(v.pg, x, false);
        ms.ug = take2(v.ug, x, true);
        ms.vg = take2(v.vg, x, false);
        ms.pesc = take2(v.pesc, x, false);
        ms.pesd = take2(v.pesd, x, false);
        ms.eesc = take2(v.eesc, x, true);
        ms.eesd = take2(v.eesd, x, true);
        ms.el = take2(v.el, x, false);
        ms.wes = take2(v.wes, x, false);
        ms.pgrid_imp = take(v.pgrid_imp, x, false);
        ms.pgrid_exp = take(v.pgrid_exp, x, false);
        ms.pn = take(v.pn, x, false);
        ms.pe = take(v.pe, x, false);
        ms.pnet = take(v.pnet, x, false);
        ms.www = take(v.www, x, false);
        ms.uww = take(v.uww, x, true);
        ms.wlrww = take(v.wlrww, x, false);
        ms.pww = take(v.pww, x, false);
        ms.pww_pump = take(v.pww_pump, x, false);
        ms.wwt = take(v.wwt, x, false);
        ms.uwt = take(v.uwt, x, true);
        ms.pwt = take(v.pwt, x, false);
        ms.pwt_pump = take(v.pwt_pump, x, false);
        ms.wstc = take2(v.wstc, x, false);
        ms.wstd = take2(v.wstd, x, false);
        ms.sp = take2(v.sp, x, true);
        ms.sv = take2(v.sv, x, true);
        ms.wlst = take2(v.wlst, x, false);
        ms.pst_pump = take2(v.pst_pump, x, false);
        ms.wmain = take(v.wmain, x, false);
        ms.wn = take(v.wn, x, false);
        ms.we = take(v.we, x, false);
        out.mwens.push_back(std::move(ms));
    }
    out.p_plus = take(idx.p_plus, x, true);
    out.p_minus = take(idx.p_minus, x, true);
    return out;
}

}  // namespace wen::nexus
