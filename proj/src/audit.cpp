#include "wen/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wen::audit {

namespace {

std::string tag(int m, int t) {
    return "[m=" + std::to_string(m) + ",t=" + std::to_string(t) + "]";
}
std::string tag(int m, const char* k, int a, int t) {
    return "[m=" + std::to_string(m) + "," + k + "=" + std::to_string(a) +
           ",t=" + std::to_string(t) + "]";
}

struct Checker {
    double tol;
    ViolationReport rep;

    void fail(const std::string& eq, const std::string& where, double residual, double bound) {
        rep.violations.push_back({eq, where, residual, bound});
    }
    // lhs <= rhs
    void le(const std::string& eq, const std::string& where, double lhs, double rhs) {
        if (lhs - rhs > tol) fail(eq, where, lhs - rhs, rhs);
    }
    // lhs >= rhs
    void ge(const std::string& eq, const std::string& where, double lhs, double rhs) {
        if (rhs - lhs > tol) fail(eq, where, rhs - lhs, rhs);
    }
    // lhs == rhs
    void eqn(const std::string& eq, const std::string& where, double lhs, double rhs) {
        if (std::abs(lhs - rhs) > tol) fail(eq, where, std::abs(lhs - rhs), rhs);
    }
    // lo <= x <= hi
    void range(const std::string& eq, const std::string& where, double x, double lo, double hi) {
        ge(eq, where, x, lo);
        le(eq, where, x, hi);
    }
};

void require_shapes(const Scenario& s, const nexus::Schedule& sched) {
    auto bad = [](const std::string& what) {
        throw std::invalid_argument("audit: schedule does not match scenario: " + what);
    };
    if (sched.horizon != s.horizon_periods) bad("horizon");
    if (sched.mwen_ids.size() != sched.mwens.size()) bad("mwen ids");
    const size_t T = static_cast<size_t>(sched.horizon);
    if (sched.p_plus.size() != T || sched.p_minus.size() != T) bad("grid binaries");
    for (size_t i = 0; i < sched.mwens.size(); ++i) {
        int mi = sched.mwen_ids[i];
        if (mi < 0 || mi >= static_cast<int>(s.mwens.size())) bad("mwen id " + std::to_string(mi));
        const MwenSpec& w = s.mwens[static_cast<size_t>(mi)];
        const nexus::MwenSchedule& ms = sched.mwens[i];
        auto dims = [&](const std::vector<std::vector<double>>& x, size_t n, const char* what) {
            if (x.size() != n) bad(ms.name + std::string(": ") + what);
            for (const auto& row : x)
                if (row.size() != T) bad(ms.name + std::string(": ") + what + " horizon");
        };
        dims(ms.pg, w.generators.size(), "generators");
        dims(ms.ug, w.generators.size(), "generators");
        dims(ms.vg, w.generators.size(), "generators");
        dims(ms.pesc, w.storages.size(), "storages");
        dims(ms.pesd, w.storages.size(), "storages");
        dims(ms.eesc, w.storages.size(), "storages");
        dims(ms.eesd, w.storages.size(), "storages");
        dims(ms.el, w.storages.size(), "storages");
        dims(ms.wes, w.storages.size(), "storages");
        dims(ms.wstc, w.tanks.size(), "tanks");
        dims(ms.wstd, w.tanks.size(), "tanks");
        dims(ms.sp, w.tanks.size(), "tanks");
        dims(ms.sv, w.tanks.size(), "tanks");
        dims(ms.wlst, w.tanks.size(), "tanks");
        dims(ms.pst_pump, w.tanks.size(), "tanks");
        size_t ww = w.wastewater ? T : 0;
        if (ms.www.size() != ww || ms.uww.size() != ww || ms.wlrww.size() != ww ||
            ms.pww.size() != ww || ms.pww_pump.size() != ww)
            bad(ms.name + ": wastewater");
        size_t wt = w.treatment ? T : 0;
        if (ms.wwt.size() != wt || ms.uwt.size() != wt || ms.pwt.size() != wt ||
            ms.pwt_pump.size() != wt)
            bad(ms.name + ": treatment");
        for (const auto* v : {&ms.pgrid_imp, &ms.pgrid_exp, &ms.pn, &ms.pe, &ms.pnet, &ms.wmain,
                              &ms.wn, &ms.we})
            if (v->size() != T) bad(ms.name + ": exchange series");
    }
}

}  // namespace

ViolationReport check_feasibility(const Scenario& s, const nexus::Schedule& sched, double tol) {
    require_shapes(s, sched);
    Checker c{tol, {}};
    const bool net = sched.mode == nexus::Mode::Networked;
    const int T = sched.horizon;
    const double dt = s.dt_hours;

    for (size_t i = 0; i < sched.mwens.size(); ++i) {
        const int m = sched.mwen_ids[i];
        const MwenSpec& w = s.mwens[static_cast<size_t>(m)];
        const nexus::MwenSchedule& ms = sched.mwens[i];
        const double grid_cap = net ? s.grid.tie_limit_kw : w.tie_line_power_kw;
        const double main_cap = net ? s.water_main.tie_limit_gph : w.tie_line_water_gph;

        for (size_t g = 0; g < w.generators.size(); ++g) {
            const GeneratorSpec& gen = w.generators[g];
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, "g", static_cast<int>(g), t);
                double pg = ms.pg[g][ut], ug = ms.ug[g][ut], vg = ms.vg[g][ut];
                c.ge("eq04", at, pg, gen.p_min_kw * ug);
                c.le("eq04", at, pg, gen.p_max_kw * ug);
                double prev = t == 0 ? (gen.initial_on ? 1.0 : 0.0) : ms.ug[g][ut - 1];
                c.ge("eq05", at, vg, ug - prev);
                c.range("eq05", at, vg, 0.0, 1.0);
            }
        }

        for (size_t b = 0; b < w.storages.size(); ++b) {
            const StorageSpec& st = w.storages[b];
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, "b", static_cast<int>(b), t);
                double pc = ms.pesc[b][ut], pd = ms.pesd[b][ut];
                c.le("eq06", at, pc, st.rate_limit_kw * ms.eesc[b][ut]);
                c.le("eq07", at, pd, st.rate_limit_kw * ms.eesd[b][ut]);
                c.le("eq08", at, ms.eesc[b][ut] + ms.eesd[b][ut], 1.0);
                double prev = t == 0 ? st.initial_level_kwh : ms.el[b][ut - 1];
                c.eqn("eq09", at, ms.el[b][ut],
                      prev + dt * (st.eta_charge * pc - pd / st.eta_discharge));
                c.range("eq10", at, ms.el[b][ut], st.level_min_kwh, st.level_max_kwh);
                if (st.kind == StorageKind::Hydrogen)
                    c.eqn("eq11", at, ms.wes[b][ut], st.water_per_kwh_charged * pc);
            }
        }

        for (int t = 0; t < T; ++t) {
            size_t ut = static_cast<size_t>(t);
            std::string at = tag(m, t);

            double supply = 0;
            for (size_t g = 0; g < w.generators.size(); ++g) supply += ms.pg[g][ut];
            for (size_t b = 0; b < w.storages.size(); ++b)
                supply += ms.pesd[b][ut] - ms.pesc[b][ut];
            supply += ms.pgrid_imp[ut] - ms.pgrid_exp[ut] + ms.pn[ut];
            c.eqn("eq12", at, supply, ms.pnet[ut]);

            double water_power = 0;
            if (w.wastewater) water_power += ms.pww[ut] + ms.pww_pump[ut];
            if (w.treatment) water_power += ms.pwt[ut] + ms.pwt_pump[ut];
            for (size_t k = 0; k < w.tanks.size(); ++k) water_power += ms.pst_pump[k][ut];
            double fixed = w.profiles.power_load_kw[ut] - w.profiles.solar_kw[ut] -
                           w.profiles.wind_kw[ut];
            c.eqn("eq13", at, ms.pnet[ut], fixed + water_power);

            c.eqn("eq14", at, ms.pe[ut], ms.pgrid_imp[ut] - ms.pgrid_exp[ut] + ms.pn[ut]);
            c.range("eq15", at, ms.pe[ut], -w.tie_line_power_kw, w.tie_line_power_kw);
            c.range("eq15", at, ms.pgrid_imp[ut], 0.0, grid_cap);
            c.range("eq15", at, ms.pgrid_exp[ut], 0.0, grid_cap);
        }

        if (w.wastewater) {
            const WastewaterSpec& ww = *w.wastewater;
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, t);
                double wf = ms.www[ut];
                c.ge("eq20", at, wf, ww.out_min_gph * ms.uww[ut]);
                c.le("eq20", at, wf, ww.out_max_gph * ms.uww[ut]);
                double inflow = ww.recovery_fraction *
                                w.profiles.water_load_gph[static_cast<size_t>(t == 0 ? 0 : t - 1)];
                double prev = t == 0 ? ww.initial_reservoir_gal : ms.wlrww[ut - 1];
                c.eqn("eq21", at, ms.wlrww[ut], prev + dt * (inflow - wf));
                c.range("eq22", at, ms.wlrww[ut], 0.0, ww.reservoir_cap_gal);
                c.eqn("eq23", at, wf, ww.gal_per_kwh * ms.pww[ut]);
                c.eqn("eq36", at, ww.pump.eta * ms.pww_pump[ut], ww.pump.alpha_kwh_per_gal * wf);
            }
        }

        if (w.treatment) {
            const TreatmentSpec& wt = *w.treatment;
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, t);
                double wf = ms.wwt[ut];
                c.ge("eq24", at, wf, wt.out_min_gph * ms.uwt[ut]);
                c.le("eq24", at, wf, wt.out_max_gph * ms.uwt[ut]);
                c.eqn("eq25", at, wf, wt.gal_per_kwh * ms.pwt[ut]);
                c.eqn("eq36", at, wt.pump.eta * ms.pwt_pump[ut], wt.pump.alpha_kwh_per_gal * wf);
            }
        }

        for (size_t k = 0; k < w.tanks.size(); ++k) {
            const TankSpec& tk = w.tanks[k];
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, "k", static_cast<int>(k), t);
                double wc = ms.wstc[k][ut], wd = ms.wstd[k][ut];
                c.le("eq26", at, wc, tk.rate_limit_gph * ms.sp[k][ut]);
                c.le("eq27", at, wd, tk.rate_limit_gph * ms.sv[k][ut]);
                c.le("eq28", at, ms.sp[k][ut] + ms.sv[k][ut], 1.0);
                double prev = t == 0 ? tk.initial_level_gal : ms.wlst[k][ut - 1];
                c.eqn("eq29", at, ms.wlst[k][ut], prev + dt * (wc - wd));
                c.range("eq30", at, ms.wlst[k][ut], 0.0, tk.cap_gal);
                c.eqn("eq36", at, tk.pump.eta * ms.pst_pump[k][ut],
                      tk.pump.alpha_kwh_per_gal * wc);
            }
        }

        for (int t = 0; t < T; ++t) {
            size_t ut = static_cast<size_t>(t);
            std::string at = tag(m, t);
            double out = ms.wmain[ut] + ms.wn[ut];
            if (w.wastewater) out += ms.www[ut];
            if (w.treatment) out += ms.wwt[ut];
            for (size_t k = 0; k < w.tanks.size(); ++k) out += ms.wstd[k][ut] - ms.wstc[k][ut];
            double demand = w.profiles.water_load_gph[ut];
            for (size_t b = 0; b < w.storages.size(); ++b)
                if (w.storages[b].kind == StorageKind::Hydrogen) demand += ms.wes[b][ut];
            c.eqn("eq31", at, out, demand);

            c.eqn("eq32", at, ms.we[ut], ms.wmain[ut] + ms.wn[ut]);
            c.range("eq33", at, ms.we[ut], -w.tie_line_water_gph, w.tie_line_water_gph);
            c.range("eq35", at, ms.wmain[ut], 0.0, main_cap);
        }

        if (!net) {
            for (int t = 0; t < T; ++t) {
                size_t ut = static_cast<size_t>(t);
                std::string at = tag(m, t);
                c.le("eq17", at, ms.pgrid_imp[ut], grid_cap * sched.p_plus[ut]);
                c.le("eq18", at, ms.pgrid_exp[ut], grid_cap * sched.p_minus[ut]);
                c.le("eq19", at, sched.p_plus[ut] + sched.p_minus[ut], 1.0);
            }
        }

        // terminal policy rows
        double peak_p = 0, peak_w = 0;
        for (double x : w.profiles.power_load_kw) peak_p = std::max(peak_p, x);
        for (double x : w.profiles.water_load_gph) peak_w = std::max(peak_w, x);
        bool equality = s.policies.terminal_sense_storage == TerminalSense::Equality;
        for (size_t b = 0; b < w.storages.size(); ++b) {
            const StorageSpec& st = w.storages[b];
            double target = std::clamp(s.policies.final_energy_fraction * peak_p * dt,
                                       st.level_min_kwh, st.level_max_kwh);
            std::string at = "[m=" + std::to_string(m) + ",b=" + std::to_string(b) + "]";
            if (equality)
                c.eqn("endES", at, ms.el[b].back(), target);
            else
                c.ge("endES", at, ms.el[b].back(), target);
        }
        for (size_t k = 0; k < w.tanks.size(); ++k) {
            double target = std::clamp(s.policies.final_water_fraction * peak_w * dt, 0.0,
                                       w.tanks[k].cap_gal);
            std::string at = "[m=" + std::to_string(m) + ",k=" + std::to_string(k) + "]";
            if (equality)
                c.eqn("endST", at, ms.wlst[k].back(), target);
            else
                c.ge("endST", at, ms.wlst[k].back(), target);
        }
        if (w.wastewater)
            c.le("endRWW", "[m=" + std::to_string(m) + "]", ms.wlrww.back(),
                 s.policies.final_wastewater_fraction * w.wastewater->reservoir_cap_gal);
    }

    if (net) {
        for (int t = 0; t < T; ++t) {
            size_t ut = static_cast<size_t>(t);
            std::string at = "[t=" + std::to_string(t) + "]";
            double pn_sum = 0, imp = 0, exp = 0, wn_sum = 0, main = 0;
            for (const nexus::MwenSchedule& ms : sched.mwens) {
                pn_sum += ms.pn[ut];
                imp += ms.pgrid_imp[ut];
                exp += ms.pgrid_exp[ut];
                wn_sum += ms.wn[ut];
                main += ms.wmain[ut];
            }
            c.eqn("eq16", at, pn_sum, 0.0);
            c.le("eq17", at, imp, s.grid.tie_limit_kw * sched.p_plus[ut]);
            c.le("eq18", at, exp, s.grid.tie_limit_kw * sched.p_minus[ut]);
            c.le("eq19", at, sched.p_plus[ut] + sched.p_minus[ut], 1.0);
            c.eqn("eq34", at, wn_sum, 0.0);
            c.le("eq35", at, main, s.water_main.tie_limit_gph);
        }
    }
    return c.rep;
}

CostBreakdown mwen_cost(const Scenario& s, const nexus::Schedule& sched, int m) {
    require_shapes(s, sched);
    if (m < 0 || m >= static_cast<int>(sched.mwens.size()))
        throw std::invalid_argument("audit: no schedule member " + std::to_string(m));
    const nexus::MwenSchedule& ms = sched.mwens[static_cast<size_t>(m)];
    const MwenSpec& w = s.mwens[static_cast<size_t>(sched.mwen_ids[static_cast<size_t>(m)])];
    const double dt = s.dt_hours;

    CostBreakdown cb;
    cb.name = ms.name;
    for (int t = 0; t < sched.horizon; ++t) {
        size_t ut = static_cast<size_t>(t);
        for (size_t g = 0; g < w.generators.size(); ++g) {
            const GeneratorSpec& gen = w.generators[g];
            cb.startup += gen.startup_cost * ms.vg[g][ut];
            cb.no_load_generation += dt * gen.no_load_per_h * ms.ug[g][ut];
            cb.marginal_generation += dt * gen.cost_per_kwh * ms.pg[g][ut];
        }
        cb.grid_purchase += dt * s.grid.buy_price[ut] * ms.pgrid_imp[ut];
        cb.grid_sale -= dt * s.grid.sell_price[ut] * ms.pgrid_exp[ut];
        cb.network_power += dt * s.network_prices.power[ut] * ms.pn[ut];
        if (w.wastewater)
            cb.water_no_load += dt * w.wastewater->no_load_per_h * ms.uww[ut];
        if (w.treatment) cb.water_no_load += dt * w.treatment->no_load_per_h * ms.uwt[ut];
        cb.main_water += dt * s.water_main.import_price[ut] * ms.wmain[ut];
        cb.network_water += dt * s.network_prices.water[ut] * ms.wn[ut];
    }
    cb.total = cb.startup + cb.no_load_generation + cb.marginal_generation + cb.grid_purchase +
               cb.grid_sale + cb.network_power + cb.water_no_load + cb.main_water +
               cb.network_water;
    return cb;
}

namespace {

ComparisonTable compare(const std::vector<CostBreakdown>& baseline,
                        const std::vector<CostBreakdown>& candidate) {
    if (baseline.size() != candidate.size())
        throw std::invalid_argument("audit: comparison over different MWEN sets");
    ComparisonTable table;
    double bsum = 0, csum = 0;
    auto add_row = [&](const std::string& name, double b, double c) {
        ComparisonRow row;
        row.name = name;
        row.baseline = b;
        row.candidate = c;
        if (b != 0.0)
            row.percent = (b - c) / b * 100.0;
        else
            row.percent_defined = false;
        table.rows.push_back(row);
    };
    for (size_t m = 0; m < baseline.size(); ++m) {
        add_row(baseline[m].name, baseline[m].total, candidate[m].total);
        bsum += baseline[m].total;
        csum += candidate[m].total;
    }
    add_row("TOTAL", bsum, csum);
    return table;
}

}  // namespace

ComparisonTable pea_delta_report(const std::vector<CostBreakdown>& before,
                                 const std::vector<CostBreakdown>& after) {
    return compare(before, after);
}

ComparisonTable network_vs_separate_report(const std::vector<CostBreakdown>& separate,
                                           const std::vector<CostBreakdown>& networked) {
    return compare(separate, networked);
}

std::string to_csv(const ComparisonTable& table) {
    std::ostringstream out;
    out << "name,baseline,candidate,percent\n";
    out.precision(10);
    for (const ComparisonRow& r : table.rows) {
        out << r.name << ',' << r.baseline << ',' << r.candidate << ',';
        if (r.percent_defined)
            out << r.percent;
        else
            out << "n/a";
        out << '\n';
    }
    return out.str();
}

}  // namespace wen::audit
