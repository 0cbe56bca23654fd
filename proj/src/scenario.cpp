#include "wen/scenario.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

namespace wen {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
    throw ScenarioParseError(ScenarioParseError::Kind::Schema, path + ": " + msg);
}

// Tracks which keys were consumed so leftovers can be rejected.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) schema_fail(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& require(const std::string& key) {
        auto it = j_.find(key);
        if (it == j_.end()) schema_fail(path_, "missing required field '" + key + "'");
        seen_.insert(key);
        return *it;
    }

    const json* optional(const std::string& key) {
        auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        seen_.insert(key);
        return &*it;
    }

    std::string sub(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) schema_fail(path_, "unknown field '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) schema_fail(path, "non-finite number");
    return v;
}

int as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_fail(path, "expected an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) schema_fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected a string");
    return j.get<std::string>();
}

Series as_series(const json& j, const std::string& path) {
    if (!j.is_array()) schema_fail(path, "expected an array of numbers");
    Series out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

PumpSpec parse_pump(const json& j, const std::string& path) {
    Obj o(j, path);
    PumpSpec p;
    if (const json* v = o.optional("alpha_kwh_per_gal")) p.alpha_kwh_per_gal = as_number(*v, o.sub("alpha_kwh_per_gal"));
    if (const json* v = o.optional("eta")) p.eta = as_number(*v, o.sub("eta"));
    o.finish();
    return p;
}

GeneratorSpec parse_generator(const json& j, const std::string& path) {
    Obj o(j, path);
    GeneratorSpec g;
    g.p_min_kw = as_number(o.require("p_min_kw"), o.sub("p_min_kw"));
    g.p_max_kw = as_number(o.require("p_max_kw"), o.sub("p_max_kw"));
    g.cost_per_kwh = as_number(o.require("cost_per_kwh"), o.sub("cost_per_kwh"));
    if (const json* v = o.optional("no_load_per_h")) g.no_load_per_h = as_number(*v, o.sub("no_load_per_h"));
    if (const json* v = o.optional("startup_cost")) g.startup_cost = as_number(*v, o.sub("startup_cost"));
    if (const json* v = o.optional("initial_on")) g.initial_on = as_bool(*v, o.sub("initial_on"));
    o.finish();
    return g;
}

StorageSpec parse_storage(const json& j, const std::string& path) {
    Obj o(j, path);
    StorageSpec s;
    std::string kind = as_string(o.require("kind"), o.sub("kind"));
    if (kind == "battery")
        s.kind = StorageKind::Battery;
    else if (kind == "hydrogen")
        s.kind = StorageKind::Hydrogen;
    else
        schema_fail(o.sub("kind"), "expected 'battery' or 'hydrogen', got '" + kind + "'");
    s.rate_limit_kw = as_number(o.require("rate_limit_kw"), o.sub("rate_limit_kw"));
    if (const json* v = o.optional("level_min_kwh")) s.level_min_kwh = as_number(*v, o.sub("level_min_kwh"));
    s.level_max_kwh = as_number(o.require("level_max_kwh"), o.sub("level_max_kwh"));
    s.eta_charge = as_number(o.require("eta_charge"), o.sub("eta_charge"));
    s.eta_discharge = as_number(o.require("eta_discharge"), o.sub("eta_discharge"));
    if (const json* v = o.optional("initial_level_kwh"))
        s.initial_level_kwh = as_number(*v, o.sub("initial_level_kwh"));
    else
        s.initial_level_kwh = 0.5 * s.level_max_kwh;
    if (const json* v = o.optional("water_per_kwh_charged"))
        s.water_per_kwh_charged = as_number(*v, o.sub("water_per_kwh_charged"));
    else
        s.water_per_kwh_charged = s.kind == StorageKind::Hydrogen ? 0.05 : 0.0;
    o.finish();
    return s;
}

WastewaterSpec parse_wastewater(const json& j, const std::string& path) {
    Obj o(j, path);
    WastewaterSpec w;
    if (const json* v = o.optional("out_min_gph")) w.out_min_gph = as_number(*v, o.sub("out_min_gph"));
    w.out_max_gph = as_number(o.require("out_max_gph"), o.sub("out_max_gph"));
    w.reservoir_cap_gal = as_number(o.require("reservoir_cap_gal"), o.sub("reservoir_cap_gal"));
    if (const json* v = o.optional("initial_reservoir_gal"))
        w.initial_reservoir_gal = as_number(*v, o.sub("initial_reservoir_gal"));
    else
        w.initial_reservoir_gal = 0.25 * w.reservoir_cap_gal;
    w.gal_per_kwh = as_number(o.require("gal_per_kwh"), o.sub("gal_per_kwh"));
    if (const json* v = o.optional("no_load_per_h")) w.no_load_per_h = as_number(*v, o.sub("no_load_per_h"));
    if (const json* v = o.optional("recovery_fraction")) w.recovery_fraction = as_number(*v, o.sub("recovery_fraction"));
    if (const json* v = o.optional("pump")) w.pump = parse_pump(*v, o.sub("pump"));
    o.finish();
    return w;
}

TreatmentSpec parse_treatment(const json& j, const std::string& path) {
    Obj o(j, path);
    TreatmentSpec t;
    if (const json* v = o.optional("out_min_gph")) t.out_min_gph = as_number(*v, o.sub("out_min_gph"));
    t.out_max_gph = as_number(o.require("out_max_gph"), o.sub("out_max_gph"));
    t.gal_per_kwh = as_number(o.require("gal_per_kwh"), o.sub("gal_per_kwh"));
    if (const json* v = o.optional("no_load_per_h")) t.no_load_per_h = as_number(*v, o.sub("no_load_per_h"));
    if (const json* v = o.optional("pump")) t.pump = parse_pump(*v, o.sub("pump"));
    o.finish();
    return t;
}

TankSpec parse_tank(const json& j, const std::string& path) {
    Obj o(j, path);
    TankSpec t;
    t.rate_limit_gph = as_number(o.require("rate_limit_gph"), o.sub("rate_limit_gph"));
    t.cap_gal = as_number(o.require("cap_gal"), o.sub("cap_gal"));
    if (const json* v = o.optional("initial_level_gal"))
        t.initial_level_gal = as_number(*v, o.sub("initial_level_gal"));
    else
        t.initial_level_gal = 0.5 * t.cap_gal;
    if (const json* v = o.optional("pump")) t.pump = parse_pump(*v, o.sub("pump"));
    o.finish();
    return t;
}

Profiles parse_profiles(const json& j, const std::string& path) {
    Obj o(j, path);
    Profiles p;
    p.power_load_kw = as_series(o.require("power_load_kw"), o.sub("power_load_kw"));
    p.water_load_gph = as_series(o.require("water_load_gph"), o.sub("water_load_gph"));
    p.solar_kw = as_series(o.require("solar_kw"), o.sub("solar_kw"));
    p.wind_kw = as_series(o.require("wind_kw"), o.sub("wind_kw"));
    o.finish();
    return p;
}

MwenSpec parse_mwen(const json& j, const std::string& path) {
    Obj o(j, path);
    MwenSpec m;
    m.name = as_string(o.require("name"), o.sub("name"));
    m.tie_line_power_kw = as_number(o.require("tie_line_power_kw"), o.sub("tie_line_power_kw"));
    m.tie_line_water_gph = as_number(o.require("tie_line_water_gph"), o.sub("tie_line_water_gph"));
    if (const json* v = o.optional("generators")) {
        if (!v->is_array()) schema_fail(o.sub("generators"), "expected an array");
        for (size_t i = 0; i < v->size(); ++i)
            m.generators.push_back(parse_generator((*v)[i], o.sub("generators") + "[" + std::to_string(i) + "]"));
    }
    if (const json* v = o.optional("storages")) {
        if (!v->is_array()) schema_fail(o.sub("storages"), "expected an array");
        for (size_t i = 0; i < v->size(); ++i)
            m.storages.push_back(parse_storage((*v)[i], o.sub("storages") + "[" + std::to_string(i) + "]"));
    }
    if (const json* v = o.optional("wastewater")) m.wastewater = parse_wastewater(*v, o.sub("wastewater"));
    if (const json* v = o.optional("treatment")) m.treatment = parse_treatment(*v, o.sub("treatment"));
    if (const json* v = o.optional("tanks")) {
        if (!v->is_array()) schema_fail(o.sub("tanks"), "expected an array");
        for (size_t i = 0; i < v->size(); ++i)
            m.tanks.push_back(parse_tank((*v)[i], o.sub("tanks") + "[" + std::to_string(i) + "]"));
    }
    m.profiles = parse_profiles(o.require("profiles"), o.sub("profiles"));
    o.finish();
    return m;
}

json dump_pump(const PumpSpec& p) {
    json j;
    j["alpha_kwh_per_gal"] = p.alpha_kwh_per_gal;
    j["eta"] = p.eta;
    return j;
}

json dump_series(const Series& s) { return json(s); }

}  // namespace

Scenario parse_scenario(const std::string& document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ScenarioParseError(ScenarioParseError::Kind::Syntax, e.what());
    }
    Obj o(root, "scenario");
    Scenario s;
    s.horizon_periods = as_count(o.require("horizon_periods"), o.sub("horizon_periods"));
    s.dt_hours = as_number(o.require("dt_hours"), o.sub("dt_hours"));

    {
        Obj g(o.require("grid"), o.sub("grid"));
        s.grid.buy_price = as_series(g.require("buy_price_usd_per_kwh"), g.sub("buy_price_usd_per_kwh"));
        if (const json* v = g.optional("sell_price_usd_per_kwh"))
            s.grid.sell_price = as_series(*v, g.sub("sell_price_usd_per_kwh"));
        else {
            s.grid.sell_price = s.grid.buy_price;
            for (double& p : s.grid.sell_price) p *= 0.9;
        }
        s.grid.tie_limit_kw = as_number(g.require("tie_limit_kw"), g.sub("tie_limit_kw"));
        g.finish();
    }
    {
        Obj w(o.require("water_main"), o.sub("water_main"));
        s.water_main.import_price = as_series(w.require("import_price_usd_per_gal"), w.sub("import_price_usd_per_gal"));
        s.water_main.tie_limit_gph = as_number(w.require("tie_limit_gph"), w.sub("tie_limit_gph"));
        w.finish();
    }
    {
        const json* np = o.optional("network_prices");
        bool have_power = false, have_water = false;
        if (np) {
            Obj n(*np, o.sub("network_prices"));
            if (const json* v = n.optional("power_usd_per_kwh")) {
                s.network_prices.power = as_series(*v, n.sub("power_usd_per_kwh"));
                have_power = true;
            }
            if (const json* v = n.optional("water_usd_per_gal")) {
                s.network_prices.water = as_series(*v, n.sub("water_usd_per_gal"));
                have_water = true;
            }
            n.finish();
        }
        if (!have_power) {
            size_t n = std::min(s.grid.buy_price.size(), s.grid.sell_price.size());
            s.network_prices.power.resize(n);
            for (size_t t = 0; t < n; ++t)
                s.network_prices.power[t] = 0.5 * (s.grid.buy_price[t] + s.grid.sell_price[t]);
        }
        if (!have_water) {
            s.network_prices.water = s.water_main.import_price;
            for (double& p : s.network_prices.water) p *= 0.5;
        }
    }
    {
        const json* pp = o.optional("policies");
        if (pp) {
            Obj p(*pp, o.sub("policies"));
            if (const json* v = p.optional("final_energy_fraction"))
                s.policies.final_energy_fraction = as_number(*v, p.sub("final_energy_fraction"));
            if (const json* v = p.optional("final_water_fraction"))
                s.policies.final_water_fraction = as_number(*v, p.sub("final_water_fraction"));
            if (const json* v = p.optional("final_wastewater_fraction"))
                s.policies.final_wastewater_fraction = as_number(*v, p.sub("final_wastewater_fraction"));
            if (const json* v = p.optional("terminal_sense_storage")) {
                std::string sense = as_string(*v, p.sub("terminal_sense_storage"));
                if (sense == "equality")
                    s.policies.terminal_sense_storage = TerminalSense::Equality;
                else if (sense == "at-least")
                    s.policies.terminal_sense_storage = TerminalSense::AtLeast;
                else
                    schema_fail(p.sub("terminal_sense_storage"), "expected 'equality' or 'at-least', got '" + sense + "'");
            }
            p.finish();
        }
    }
    {
        const json& mj = o.require("mwens");
        if (!mj.is_array()) schema_fail(o.sub("mwens"), "expected an array");
        for (size_t i = 0; i < mj.size(); ++i)
            s.mwens.push_back(parse_mwen(mj[i], "mwens[" + std::to_string(i) + "]"));
    }
    o.finish();
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    json root;
    root["horizon_periods"] = s.horizon_periods;
    root["dt_hours"] = s.dt_hours;

    json grid;
    grid["buy_price_usd_per_kwh"] = dump_series(s.grid.buy_price);
    grid["sell_price_usd_per_kwh"] = dump_series(s.grid.sell_price);
    grid["tie_limit_kw"] = s.grid.tie_limit_kw;
    root["grid"] = std::move(grid);

    json wm;
    wm["import_price_usd_per_gal"] = dump_series(s.water_main.import_price);
    wm["tie_limit_gph"] = s.water_main.tie_limit_gph;
    root["water_main"] = std::move(wm);

    json np;
    np["power_usd_per_kwh"] = dump_series(s.network_prices.power);
    np["water_usd_per_gal"] = dump_series(s.network_prices.water);
    root["network_prices"] = std::move(np);

    json pol;
    pol["final_energy_fraction"] = s.policies.final_energy_fraction;
    pol["final_water_fraction"] = s.policies.final_water_fraction;
    pol["final_wastewater_fraction"] = s.policies.final_wastewater_fraction;
    pol["terminal_sense_storage"] =
        s.policies.terminal_sense_storage == TerminalSense::Equality ? "equality" : "at-least";
    root["policies"] = std::move(pol);

    json mwens = json::array();
    for (const MwenSpec& m : s.mwens) {
        json mj;
        mj["name"] = m.name;
        mj["tie_line_power_kw"] = m.tie_line_power_kw;
        mj["tie_line_water_gph"] = m.tie_line_water_gph;
        json gens = json::array();
        for (const GeneratorSpec& g : m.generators) {
            json gj;
            gj["p_min_kw"] = g.p_min_kw;
            gj["p_max_kw"] = g.p_max_kw;
            gj["cost_per_kwh"] = g.cost_per_kwh;
            gj["no_load_per_h"] = g.no_load_per_h;
            gj["startup_cost"] = g.startup_cost;
            gj["initial_on"] = g.initial_on;
            gens.push_back(std::move(gj));
        }
        mj["generators"] = std::move(gens);
        json stos = json::array();
        for (const StorageSpec& st : m.storages) {
            json sj;
            sj["kind"] = st.kind == StorageKind::Hydrogen ? "hydrogen" : "battery";
            sj["rate_limit_kw"] = st.rate_limit_kw;
            sj["level_min_kwh"] = st.level_min_kwh;
            sj["level_max_kwh"] = st.level_max_kwh;
            sj["eta_charge"] = st.eta_charge;
            sj["eta_discharge"] = st.eta_discharge;
            sj["initial_level_kwh"] = st.initial_level_kwh;
            sj["water_per_kwh_charged"] = st.water_per_kwh_charged;
            stos.push_back(std::move(sj));
        }
        mj["storages"] = std::move(stos);
        if (m.wastewater) {
            const WastewaterSpec& w = *m.wastewater;
            json wj;
            wj["out_min_gph"] = w.out_min_gph;
            wj["out_max_gph"] = w.out_max_gph;
            wj["reservoir_cap_gal"] = w.reservoir_cap_gal;
            wj["initial_reservoir_gal"] = w.initial_reservoir_gal;
            wj["gal_per_kwh"] = w.gal_per_kwh;
            wj["no_load_per_h"] = w.no_load_per_h;
            wj["recovery_fraction"] = w.recovery_fraction;
            wj["pump"] = dump_pump(w.pump);
            mj["wastewater"] = std::move(wj);
        }
        if (m.treatment) {
            const TreatmentSpec& t = *m.treatment;
            json tj;
            tj["out_min_gph"] = t.out_min_gph;
            tj["out_max_gph"] = t.out_max_gph;
            tj["gal_per_kwh"] = t.gal_per_kwh;
            tj["no_load_per_h"] = t.no_load_per_h;
            tj["pump"] = dump_pump(t.pump);
            mj["treatment"] = std::move(tj);
        }
        json tanks = json::array();
        for (const TankSpec& t : m.tanks) {
            json tj;
            tj["rate_limit_gph"] = t.rate_limit_gph;
            tj["cap_gal"] = t.cap_gal;
            tj["initial_level_gal"] = t.initial_level_gal;
            tj["pump"] = dump_pump(t.pump);
            tanks.push_back(std::move(tj));
        }
        mj["tanks"] = std::move(tanks);
        json pj;
        pj["power_load_kw"] = dump_series(m.profiles.power_load_kw);
        pj["water_load_gph"] = dump_series(m.profiles.water_load_gph);
        pj["solar_kw"] = dump_series(m.profiles.solar_kw);
        pj["wind_kw"] = dump_series(m.profiles.wind_kw);
        mj["profiles"] = std::move(pj);
        mwens.push_back(std::move(mj));
    }
    root["mwens"] = std::move(mwens);
    return root.dump(2) + "\n";
}

namespace {

struct Checker {
    std::vector<Violation> out;
    void add(std::string where, std::string msg) { out.push_back({std::move(where), std::move(msg)}); }
    void finite(double v, const std::string& where) {
        if (!std::isfinite(v)) add(where, "must be finite");
    }
    void series(const Series& s, const std::string& where, int T, bool nonneg) {
        if (static_cast<int>(s.size()) != T)
            add(where, "length " + std::to_string(s.size()) + " does not match horizon_periods " + std::to_string(T));
        for (size_t t = 0; t < s.size(); ++t) {
            std::string at = where + "[" + std::to_string(t) + "]";
            finite(s[t], at);
            if (nonneg && s[t] < 0) add(at, "must be >= 0, got " + std::to_string(s[t]));
        }
    }
    void pump(const PumpSpec& p, const std::string& where) {
        finite(p.alpha_kwh_per_gal, where + ".alpha_kwh_per_gal");
        finite(p.eta, where + ".eta");
        if (p.alpha_kwh_per_gal < 0) add(where + ".alpha_kwh_per_gal", "must be >= 0");
        if (!(p.eta > 0 && p.eta <= 1)) add(where + ".eta", "must be in (0,1]");
    }
};

}  // namespace

ValidationReport validate_scenario(const Scenario& s) {
    Checker c;
    const int T = s.horizon_periods;
    if (T < 1) c.add("horizon_periods", "must be >= 1, got " + std::to_string(T));
    c.finite(s.dt_hours, "dt_hours");
    if (!(s.dt_hours > 0)) c.add("dt_hours", "must be > 0");

    c.series(s.grid.buy_price, "grid.buy_price_usd_per_kwh", T, true);
    c.series(s.grid.sell_price, "grid.sell_price_usd_per_kwh", T, true);
    c.finite(s.grid.tie_limit_kw, "grid.tie_limit_kw");
    if (s.grid.tie_limit_kw < 0) c.add("grid.tie_limit_kw", "must be >= 0");
    if (s.grid.buy_price.size() == s.grid.sell_price.size())
        for (size_t t = 0; t < s.grid.buy_price.size(); ++t)
            if (s.grid.sell_price[t] > s.grid.buy_price[t])
                c.add("grid.sell_price_usd_per_kwh[" + std::to_string(t) + "]",
                      "sell price exceeds buy price");

    c.series(s.water_main.import_price, "water_main.import_price_usd_per_gal", T, true);
    c.finite(s.water_main.tie_limit_gph, "water_main.tie_limit_gph");
    if (s.water_main.tie_limit_gph < 0) c.add("water_main.tie_limit_gph", "must be >= 0");

    c.series(s.network_prices.power, "network_prices.power_usd_per_kwh", T, true);
    c.series(s.network_prices.water, "network_prices.water_usd_per_gal", T, true);
    size_t n = s.network_prices.power.size();
    if (n == s.grid.buy_price.size() && n == s.grid.sell_price.size())
        for (size_t t = 0; t < n; ++t) {
            if (s.network_prices.power[t] > s.grid.buy_price[t] ||
                s.network_prices.power[t] < s.grid.sell_price[t])
                c.add("network_prices.power_usd_per_kwh[" + std::to_string(t) + "]",
                      "must lie between grid sell and buy prices");
        }
    if (s.network_prices.water.size() == s.water_main.import_price.size())
        for (size_t t = 0; t < s.network_prices.water.size(); ++t)
            if (s.network_prices.water[t] > s.water_main.import_price[t])
                c.add("network_prices.water_usd_per_gal[" + std::to_string(t) + "]",
                      "exceeds water main import price");

    auto frac = [&](double v, const char* name) {
        c.finite(v, std::string("policies.") + name);
        if (v < 0 || v > 1) c.add(std::string("policies.") + name, "must be in [0,1]");
    };
    frac(s.policies.final_energy_fraction, "final_energy_fraction");
    frac(s.policies.final_water_fraction, "final_water_fraction");
    frac(s.policies.final_wastewater_fraction, "final_wastewater_fraction");

    std::set<std::string> names;
    for (size_t mi = 0; mi < s.mwens.size(); ++mi) {
        const MwenSpec& m = s.mwens[mi];
        std::string mp = "mwens[" + std::to_string(mi) + "]";
        if (!names.insert(m.name).second) c.add(mp + ".name", "duplicate name '" + m.name + "'");
        c.finite(m.tie_line_power_kw, mp + ".tie_line_power_kw");
        c.finite(m.tie_line_water_gph, mp + ".tie_line_water_gph");
        if (m.tie_line_power_kw < 0) c.add(mp + ".tie_line_power_kw", "must be >= 0");
        if (m.tie_line_water_gph < 0) c.add(mp + ".tie_line_water_gph", "must be >= 0");

        for (size_t gi = 0; gi < m.generators.size(); ++gi) {
            const GeneratorSpec& g = m.generators[gi];
            std::string gp = mp + ".generators[" + std::to_string(gi) + "]";
            c.finite(g.p_min_kw, gp + ".p_min_kw");
            c.finite(g.p_max_kw, gp + ".p_max_kw");
            c.finite(g.cost_per_kwh, gp + ".cost_per_kwh");
            c.finite(g.no_load_per_h, gp + ".no_load_per_h");
            c.finite(g.startup_cost, gp + ".startup_cost");
            if (!(g.p_min_kw >= 0 && g.p_min_kw <= g.p_max_kw))
                c.add(gp, "requires 0 <= p_min_kw <= p_max_kw");
            if (g.cost_per_kwh < 0 || g.no_load_per_h < 0 || g.startup_cost < 0)
                c.add(gp, "costs must be >= 0");
        }
        for (size_t si = 0; si < m.storages.size(); ++si) {
            const StorageSpec& st = m.storages[si];
            std::string sp = mp + ".storages[" + std::to_string(si) + "]";
            c.finite(st.rate_limit_kw, sp + ".rate_limit_kw");
            c.finite(st.level_min_kwh, sp + ".level_min_kwh");
            c.finite(st.level_max_kwh, sp + ".level_max_kwh");
            c.finite(st.initial_level_kwh, sp + ".initial_level_kwh");
            c.finite(st.eta_charge, sp + ".eta_charge");
            c.finite(st.eta_discharge, sp + ".eta_discharge");
            c.finite(st.water_per_kwh_charged, sp + ".water_per_kwh_charged");
            if (st.rate_limit_kw < 0) c.add(sp + ".rate_limit_kw", "must be >= 0");
            if (!(st.level_min_kwh <= st.initial_level_kwh && st.initial_level_kwh <= st.level_max_kwh))
                c.add(sp + ".initial_level_kwh", "must lie in [level_min_kwh, level_max_kwh]");
            if (!(st.eta_charge > 0 && st.eta_charge <= 1)) c.add(sp + ".eta_charge", "must be in (0,1]");
            if (!(st.eta_discharge > 0 && st.eta_discharge <= 1))
                c.add(sp + ".eta_discharge", "must be in (0,1]");
            if (st.water_per_kwh_charged < 0) c.add(sp + ".water_per_kwh_charged", "must be >= 0");
            if (st.kind == StorageKind::Battery && st.water_per_kwh_charged != 0)
                c.add(sp + ".water_per_kwh_charged", "must be 0 for battery kind");
        }
        if (m.wastewater) {
            const WastewaterSpec& w = *m.wastewater;
            std::string wp = mp + ".wastewater";
            c.finite(w.out_min_gph, wp + ".out_min_gph");
            c.finite(w.out_max_gph, wp + ".out_max_gph");
            c.finite(w.reservoir_cap_gal, wp + ".reservoir_cap_gal");
            c.finite(w.initial_reservoir_gal, wp + ".initial_reservoir_gal");
            c.finite(w.gal_per_kwh, wp + ".gal_per_kwh");
            c.finite(w.no_load_per_h, wp + ".no_load_per_h");
            c.finite(w.recovery_fraction, wp + ".recovery_fraction");
            if (!(w.out_min_gph >= 0 && w.out_min_gph <= w.out_max_gph))
                c.add(wp, "requires 0 <= out_min_gph <= out_max_gph");
            if (!(w.initial_reservoir_gal >= 0 && w.initial_reservoir_gal <= w.reservoir_cap_gal))
                c.add(wp + ".initial_reservoir_gal", "must lie in [0, reservoir_cap_gal]");
            if (!(w.gal_per_kwh > 0)) c.add(wp + ".gal_per_kwh", "must be > 0");
            if (w.no_load_per_h < 0) c.add(wp + ".no_load_per_h", "must be >= 0");
            if (w.recovery_fraction < 0 || w.recovery_fraction > 1)
                c.add(wp + ".recovery_fraction", "must be in [0,1]");
            c.pump(w.pump, wp + ".pump");
        }
        if (m.treatment) {
            const TreatmentSpec& t = *m.treatment;
            std::string tp = mp + ".treatment";
            c.finite(t.out_min_gph, tp + ".out_min_gph");
            c.finite(t.out_max_gph, tp + ".out_max_gph");
            c.finite(t.gal_per_kwh, tp + ".gal_per_kwh");
            c.finite(t.no_load_per_h, tp + ".no_load_per_h");
            if (!(t.out_min_gph >= 0 && t.out_min_gph <= t.out_max_gph))
                c.add(tp, "requires 0 <= out_min_gph <= out_max_gph");
            if (!(t.gal_per_kwh > 0)) c.add(tp + ".gal_per_kwh", "must be > 0");
            if (t.no_load_per_h < 0) c.add(tp + ".no_load_per_h", "must be >= 0");
            c.pump(t.pump, tp + ".pump");
        }
        for (size_t ti = 0; ti < m.tanks.size(); ++ti) {
            const TankSpec& t = m.tanks[ti];
            std::string tp = mp + ".tanks[" + std::to_string(ti) + "]";
            c.finite(t.rate_limit_gph, tp + ".rate_limit_gph");
            c.finite(t.cap_gal, tp + ".cap_gal");
            c.finite(t.initial_level_gal, tp + ".initial_level_gal");
            if (t.rate_limit_gph < 0) c.add(tp + ".rate_limit_gph", "must be >= 0");
            if (!(t.initial_level_gal >= 0 && t.initial_level_gal <= t.cap_gal))
                c.add(tp + ".initial_level_gal", "must lie in [0, cap_gal]");
            c.pump(t.pump, tp + ".pump");
        }
        std::string pp = mp + ".profiles";
        c.series(m.profiles.power_load_kw, pp + ".power_load_kw", T, true);
        c.series(m.profiles.water_load_gph, pp + ".water_load_gph", T, true);
        c.series(m.profiles.solar_kw, pp + ".solar_kw", T, true);
        c.series(m.profiles.wind_kw, pp + ".wind_kw", T, true);
    }
    return ValidationReport{std::move(c.out)};
}

namespace {

// Day-curve helpers for the bundled profiles. Hour h runs 1..T.
// demand_shape: 0 at h=6, 1 at h=18 (evening peak).
double demand_shape(int h) {
    return 0.5 * (1.0 + std::sin(std::numbers::pi * (h - 12) / 12.0));
}

double solar_shape(int h) {
    return std::max(0.0, std::sin(std::numbers::pi * (h - 7) / 12.0));
}

double wind_shape(int h) {
    return 0.6 + 0.4 * std::sin(std::numbers::pi * (h - 3) / 12.0);
}

Series make_series(int T, double base, double amp, double (*shape)(int)) {
    Series s(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) s[static_cast<size_t>(t)] = base + amp * shape(t + 1);
    return s;
}

Series flat(int T, double v) { return Series(static_cast<size_t>(T), v); }

}  // namespace

Scenario builtin_case_study() {
    const int T = 24;
    Scenario s;
    s.horizon_periods = T;
    s.dt_hours = 1.0;

    s.grid.tie_limit_kw = 5600;
    s.grid.buy_price.resize(T);
    s.grid.sell_price.resize(T);
    for (int t = 0; t < T; ++t) {
        double q = demand_shape(t + 1);
        s.grid.buy_price[static_cast<size_t>(t)] = 0.07 + 0.38 * q * q;
        s.grid.sell_price[static_cast<size_t>(t)] = 0.25 * s.grid.buy_price[static_cast<size_t>(t)];
    }
    s.water_main.import_price = flat(T, 0.006);
    s.water_main.tie_limit_gph = 3920;
    s.network_prices.power.resize(T);
    for (int t = 0; t < T; ++t)
        s.network_prices.power[static_cast<size_t>(t)] =
            0.5 * (s.grid.buy_price[static_cast<size_t>(t)] + s.grid.sell_price[static_cast<size_t>(t)]);
    s.network_prices.water = flat(T, 0.003);

    auto make_mwen = [&](const std::string& name, double pbase, double pamp, double scap,
                         double wcap, double wbase, double wamp) {
        MwenSpec m;
        m.name = name;
        m.tie_line_power_kw = 1400;
        m.tie_line_water_gph = 980;
        m.profiles.power_load_kw = make_series(T, pbase, pamp, demand_shape);
        m.profiles.water_load_gph = make_series(T, wbase, wamp, demand_shape);
        m.profiles.solar_kw = make_series(T, 0, scap, solar_shape);
        m.profiles.wind_kw = wcap > 0 ? make_series(T, 0, wcap, wind_shape) : flat(T, 0);
        return m;
    };
    auto storage = [](StorageKind kind, double rate, double cap, double ec, double ed) {
        StorageSpec st;
        st.kind = kind;
        st.rate_limit_kw = rate;
        st.level_min_kwh = 0;
        st.level_max_kwh = cap;
        st.eta_charge = ec;
        st.eta_discharge = ed;
        st.initial_level_kwh = 0.5 * cap;
        st.water_per_kwh_charged = kind == StorageKind::Hydrogen ? 0.05 : 0.0;
        return st;
    };
    auto wastewater = [](double wmax, double cap, double gpk) {
        WastewaterSpec w;
        w.out_min_gph = 0;
        w.out_max_gph = wmax;
        w.reservoir_cap_gal = cap;
        w.initial_reservoir_gal = 0.25 * cap;
        w.gal_per_kwh = gpk;
        w.no_load_per_h = 75;
        w.recovery_fraction = 0.5;
        return w;
    };
    auto treatment = [](double wmax, double gpk, double nl) {
        TreatmentSpec t;
        t.out_min_gph = 0;
        t.out_max_gph = wmax;
        t.gal_per_kwh = gpk;
        t.no_load_per_h = nl;
        return t;
    };
    auto tank = [] {
        TankSpec t;
        t.rate_limit_gph = 900;
        t.cap_gal = 10209;
        t.initial_level_gal = 0.5 * 10209;
        return t;
    };
    auto generator = [](double pmin, double pmax, double cost, double nl, double su) {
        GeneratorSpec g;
        g.p_min_kw = pmin;
        g.p_max_kw = pmax;
        g.cost_per_kwh = cost;
        g.no_load_per_h = nl;
        g.startup_cost = su;
        return g;
    };

    MwenSpec m1 = make_mwen("mwen1", 900, 900, 300, 400, 600, 500);
    m1.generators.push_back(generator(1450, 2900, 0.305, 9.85, 14.00));
    m1.storages.push_back(storage(StorageKind::Hydrogen, 1800, 9960, 0.80, 0.60));
    m1.wastewater = wastewater(720, 12000, 365);
    m1.treatment = treatment(1500, 96, 17.20);
    m1.tanks.push_back(tank());

    MwenSpec m2 = make_mwen("mwen2", 1200, 1100, 1400, 0, 850, 500);
    m2.generators.push_back(generator(2390, 4780, 0.28, 9.03, 12.78));
    m2.storages.push_back(storage(StorageKind::Battery, 2900, 10000, 0.95, 0.98));
    m2.wastewater = wastewater(1000, 18600, 382);
    m2.treatment = treatment(525, 4400, 25.50);
    m2.tanks.push_back(tank());

    MwenSpec m3 = make_mwen("mwen3", 700, 800, 250, 500, 650, 500);
    m3.generators.push_back(generator(900, 1800, 0.26, 8.45, 11.85));
    m3.storages.push_back(storage(StorageKind::Hydrogen, 1500, 8300, 0.80, 0.60));
    m3.wastewater = wastewater(720, 12000, 365);
    m3.treatment = treatment(1730, 100, 15.00);
    m3.tanks.push_back(tank());

    MwenSpec m4 = make_mwen("mwen4", 800, 900, 2400, 0, 1250, 500);
    m4.storages.push_back(storage(StorageKind::Battery, 3625, 12500, 0.95, 0.98));
    m4.wastewater = wastewater(1000, 18600, 382);
    m4.tanks.push_back(tank());

    s.mwens = {std::move(m1), std::move(m2), std::move(m3), std::move(m4)};
    return s;
}

Scenario builtin_reduced() {
    Scenario full = builtin_case_study();
    const int T = 6;
    Scenario s;
    s.horizon_periods = T;
    s.dt_hours = 1.0;
    // sample afternoon hours 13..18 of the full-day curves
    auto window = [&](const Series& in) {
        return Series(in.begin() + 12, in.begin() + 12 + T);
    };
    s.grid.buy_price = window(full.grid.buy_price);
    s.grid.sell_price = window(full.grid.sell_price);
    s.grid.tie_limit_kw = 2800;
    s.water_main.import_price = window(full.water_main.import_price);
    s.water_main.tie_limit_gph = 1960;
    s.network_prices.power = window(full.network_prices.power);
    s.network_prices.water = window(full.network_prices.water);
    s.policies = full.policies;
    for (size_t i = 0; i < 2; ++i) {
        MwenSpec m = full.mwens[i];
        m.profiles.power_load_kw = window(m.profiles.power_load_kw);
        m.profiles.water_load_gph = window(m.profiles.water_load_gph);
        m.profiles.solar_kw = window(m.profiles.solar_kw);
        m.profiles.wind_kw = window(m.profiles.wind_kw);
        s.mwens.push_back(std::move(m));
    }
    return s;
}

Scenario builtin_scenario(const std::string& name) {
    if (name == "paper_4mwen") return builtin_case_study();
    if (name == "reduced_2mwen") return builtin_reduced();
    throw std::invalid_argument("unknown builtin scenario: " + name);
}

}  // namespace wen
