#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "wen/scenario.hpp"

using namespace wen;

namespace {

const char* kMinimalDoc = R"({
  "horizon_periods": 2,
  "dt_hours": 1.0,
  "grid": {"buy_price_usd_per_kwh": [0.2, 0.3], "tie_limit_kw": 100},
  "water_main": {"import_price_usd_per_gal": [0.006, 0.006], "tie_limit_gph": 50},
  "mwens": [
    {
      "name": "solo",
      "tie_line_power_kw": 100,
      "tie_line_water_gph": 50,
      "generators": [{"p_min_kw": 10, "p_max_kw": 40, "cost_per_kwh": 0.25}],
      "profiles": {
        "power_load_kw": [20, 30],
        "water_load_gph": [5, 5],
        "solar_kw": [0, 0],
        "wind_kw": [0, 0]
      }
    }
  ]
})";

bool has_violation_containing(const ValidationReport& r, const std::string& where_frag) {
    for (const auto& v : r.violations)
        if (v.where.find(where_frag) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("parse: minimal document gets the documented defaults") {
    Scenario s = parse_scenario(kMinimalDoc);
    CHECK(s.horizon_periods == 2);
    CHECK(s.mwens.size() == 1);
    CHECK(s.policies.final_energy_fraction == 0.5);
    CHECK(s.policies.final_water_fraction == 0.5);
    CHECK(s.policies.final_wastewater_fraction == 0.5);
    CHECK(s.policies.terminal_sense_storage == TerminalSense::Equality);
    CHECK(s.grid.sell_price[0] == doctest::Approx(0.9 * 0.2));
    CHECK(s.network_prices.power[1] == doctest::Approx(0.5 * (0.3 + 0.27)));
    CHECK(s.network_prices.water[0] == doctest::Approx(0.003));
    CHECK(s.mwens[0].generators[0].no_load_per_h == 0.0);
    CHECK(s.mwens[0].generators[0].initial_on == false);
    CHECK(validate_scenario(s).ok());
}

TEST_CASE("parse: missing dt_hours is a schema error naming the field") {
    std::string doc = kMinimalDoc;
    auto pos = doc.find("\"dt_hours\": 1.0,");
    doc.erase(pos, std::string("\"dt_hours\": 1.0,").size());
    try {
        parse_scenario(doc);
        FAIL("expected a schema error");
    } catch (const ScenarioParseError& e) {
        CHECK(e.kind == ScenarioParseError::Kind::Schema);
        CHECK(std::string(e.what()).find("dt_hours") != std::string::npos);
    }
}

TEST_CASE("parse: malformed text is a syntax error") {
    try {
        parse_scenario("{ not json");
        FAIL("expected a syntax error");
    } catch (const ScenarioParseError& e) {
        CHECK(e.kind == ScenarioParseError::Kind::Syntax);
    }
}

TEST_CASE("parse: unknown keys are rejected") {
    std::string doc = kMinimalDoc;
    doc.insert(doc.find("\"horizon_periods\""), "\"bogus_key\": 1,\n  ");
    try {
        parse_scenario(doc);
        FAIL("expected a schema error");
    } catch (const ScenarioParseError& e) {
        CHECK(e.kind == ScenarioParseError::Kind::Schema);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("parse: storage defaults depend on kind") {
    std::string doc = kMinimalDoc;
    doc.insert(doc.find("\"profiles\""),
               R"("storages": [
        {"kind": "hydrogen", "rate_limit_kw": 10, "level_max_kwh": 100,
         "eta_charge": 0.8, "eta_discharge": 0.6},
        {"kind": "battery", "rate_limit_kw": 10, "level_max_kwh": 100,
         "eta_charge": 0.95, "eta_discharge": 0.98}
      ],
      )");
    Scenario s = parse_scenario(doc);
    REQUIRE(s.mwens[0].storages.size() == 2);
    CHECK(s.mwens[0].storages[0].initial_level_kwh == 50.0);
    CHECK(s.mwens[0].storages[0].water_per_kwh_charged == 0.05);
    CHECK(s.mwens[0].storages[1].water_per_kwh_charged == 0.0);
}

TEST_CASE("builtin case study matches the published parameters") {
    Scenario s = builtin_case_study();
    REQUIRE(s.mwens.size() == 4);
    CHECK(s.horizon_periods == 24);
    CHECK(s.dt_hours == 1.0);
    CHECK(s.grid.tie_limit_kw == 5600);
    CHECK(s.water_main.tie_limit_gph == 3920);
    CHECK(s.mwens[0].tie_line_power_kw == 1400);
    CHECK(s.mwens[0].tie_line_water_gph == 980);
    CHECK(s.mwens[0].storages[0].eta_discharge == 0.60);
    CHECK(s.mwens[0].storages[0].kind == StorageKind::Hydrogen);
    CHECK(s.mwens[1].storages[0].kind == StorageKind::Battery);
    CHECK(s.mwens[1].storages[0].eta_discharge == 0.98);
    CHECK(s.mwens[2].storages[0].kind == StorageKind::Hydrogen);
    CHECK(s.mwens[3].storages[0].kind == StorageKind::Battery);
    REQUIRE(s.mwens[1].treatment.has_value());
    CHECK(s.mwens[1].treatment->gal_per_kwh == 4400);
    CHECK(s.mwens[3].generators.empty());
    CHECK(!s.mwens[3].treatment.has_value());
    CHECK(s.mwens[0].generators[0].p_min_kw == 1450);
    CHECK(s.mwens[0].generators[0].cost_per_kwh == 0.305);
    CHECK(s.mwens[2].generators[0].startup_cost == 11.85);
    CHECK(s.mwens[0].wastewater->out_max_gph == 720);
    CHECK(s.mwens[1].wastewater->reservoir_cap_gal == 18600);
    CHECK(s.mwens[0].wastewater->recovery_fraction == 0.5);
    CHECK(s.mwens[0].tanks[0].cap_gal == 10209);
    for (double p : s.water_main.import_price) CHECK(p == 0.006);
}

TEST_CASE("builtin scenarios validate cleanly") {
    CHECK(validate_scenario(builtin_case_study()).ok());
    CHECK(validate_scenario(builtin_reduced()).ok());
    Scenario r = builtin_reduced();
    CHECK(r.horizon_periods == 6);
    CHECK(r.mwens.size() == 2);
}

TEST_CASE("builtin lookup by name") {
    CHECK(builtin_scenario("paper_4mwen").mwens.size() == 4);
    CHECK(builtin_scenario("reduced_2mwen").mwens.size() == 2);
    CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
}

TEST_CASE("validate: eta_charge out of range names the unit and bound") {
    Scenario s = builtin_case_study();
    s.mwens[1].storages[0].eta_charge = 1.2;
    auto r = validate_scenario(s);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].where == "mwens[1].storages[0].eta_charge");
    CHECK(r.violations[0].message.find("(0,1]") != std::string::npos);
}

TEST_CASE("validate: network power price above buy price at t=3") {
    Scenario s = builtin_case_study();
    s.network_prices.power[3] = s.grid.buy_price[3] + 0.01;
    auto r = validate_scenario(s);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].where == "network_prices.power_usd_per_kwh[3]");
}

TEST_CASE("validate: profile length mismatch and negative entries are reported") {
    Scenario s = builtin_reduced();
    s.mwens[0].profiles.solar_kw.pop_back();
    s.mwens[1].profiles.water_load_gph[2] = -1.0;
    auto r = validate_scenario(s);
    CHECK(has_violation_containing(r, "mwens[0].profiles.solar_kw"));
    CHECK(has_violation_containing(r, "mwens[1].profiles.water_load_gph[2]"));
}

TEST_CASE("validate: non-finite numbers are rejected") {
    Scenario s = builtin_reduced();
    s.mwens[0].tie_line_power_kw = std::numeric_limits<double>::quiet_NaN();
    s.grid.buy_price[0] = std::numeric_limits<double>::infinity();
    auto r = validate_scenario(s);
    CHECK(has_violation_containing(r, "mwens[0].tie_line_power_kw"));
    CHECK(has_violation_containing(r, "grid.buy_price_usd_per_kwh[0]"));
}

TEST_CASE("parse: NaN literals in documents are malformed") {
    std::string doc = kMinimalDoc;
    auto pos = doc.find("\"dt_hours\": 1.0");
    doc.replace(pos, std::string("\"dt_hours\": 1.0").size(), "\"dt_hours\": NaN");
    CHECK_THROWS_AS(parse_scenario(doc), ScenarioParseError);
}

TEST_CASE("round-trip identity and byte-stable serialization") {
    for (const char* name : {"paper_4mwen", "reduced_2mwen"}) {
        Scenario s = builtin_scenario(name);
        std::string text = serialize_scenario(s);
        Scenario t = parse_scenario(text);
        std::string text2 = serialize_scenario(t);
        CHECK(text == text2);
        // spot-check exact field equality after the trip
        CHECK(t.horizon_periods == s.horizon_periods);
        CHECK(t.dt_hours == s.dt_hours);
        REQUIRE(t.mwens.size() == s.mwens.size());
        for (size_t i = 0; i < s.mwens.size(); ++i) {
            CHECK(t.mwens[i].name == s.mwens[i].name);
            CHECK(t.mwens[i].profiles.power_load_kw == s.mwens[i].profiles.power_load_kw);
            CHECK(t.mwens[i].profiles.water_load_gph == s.mwens[i].profiles.water_load_gph);
            CHECK(t.mwens[i].profiles.solar_kw == s.mwens[i].profiles.solar_kw);
            CHECK(t.mwens[i].profiles.wind_kw == s.mwens[i].profiles.wind_kw);
            CHECK(t.mwens[i].storages.size() == s.mwens[i].storages.size());
            CHECK(t.mwens[i].wastewater.has_value() == s.mwens[i].wastewater.has_value());
        }
        CHECK(t.grid.buy_price == s.grid.buy_price);
        CHECK(t.grid.sell_price == s.grid.sell_price);
        CHECK(t.network_prices.power == s.network_prices.power);
        CHECK(t.network_prices.water == s.network_prices.water);
    }
}

TEST_CASE("bundled scenario file matches the builtin case study byte for byte") {
    std::ifstream in(WEN_SOURCE_DIR "/scenarios/paper_4mwen.json");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == serialize_scenario(builtin_case_study()));
    Scenario s = parse_scenario(buf.str());
    CHECK(validate_scenario(s).ok());
    CHECK(s.mwens.size() == 4);
}

TEST_CASE("parse: mutated round-trip preserves explicit non-default values") {
    Scenario s = builtin_case_study();
    s.policies.terminal_sense_storage = TerminalSense::AtLeast;
    s.policies.final_energy_fraction = 0.25;
    s.mwens[0].generators[0].initial_on = true;
    s.mwens[2].wastewater->pump.eta = 0.71;
    Scenario t = parse_scenario(serialize_scenario(s));
    CHECK(t.policies.terminal_sense_storage == TerminalSense::AtLeast);
    CHECK(t.policies.final_energy_fraction == 0.25);
    CHECK(t.mwens[0].generators[0].initial_on == true);
    CHECK(t.mwens[2].wastewater->pump.eta == 0.71);
}
