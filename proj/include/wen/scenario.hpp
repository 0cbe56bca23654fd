#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wen {

using Series = std::vector<double>;

struct PumpSpec {
    double alpha_kwh_per_gal = 0.002;
    double eta = 0.8;
};

struct GeneratorSpec {
    double p_min_kw = 0;
    double p_max_kw = 0;
    double cost_per_kwh = 0;
    double no_load_per_h = 0;
    double startup_cost = 0;
    bool initial_on = false;
};

enum class StorageKind { Battery, Hydrogen };

struct StorageSpec {
    StorageKind kind = StorageKind::Battery;
    double rate_limit_kw = 0;
    double level_min_kwh = 0;
    double level_max_kwh = 0;
    double eta_charge = 1.0;
    double eta_discharge = 1.0;
    double initial_level_kwh = 0;
    double water_per_kwh_charged = 0;  // hydrogen electrolysis draw, 0 for batteries
};

struct WastewaterSpec {
    double out_min_gph = 0;
    double out_max_gph = 0;
    double reservoir_cap_gal = 0;
    double initial_reservoir_gal = 0;
    double gal_per_kwh = 1;
    double no_load_per_h = 0;
    double recovery_fraction = 0.5;  // share of previous-period water demand collected
    PumpSpec pump;
};

struct TreatmentSpec {
    double out_min_gph = 0;
    double out_max_gph = 0;
    double gal_per_kwh = 1;
    double no_load_per_h = 0;
    PumpSpec pump;
};

struct TankSpec {
    double rate_limit_gph = 0;
    double cap_gal = 0;
    double initial_level_gal = 0;
    PumpSpec pump;
};

struct Profiles {
    Series power_load_kw;
    Series water_load_gph;
    Series solar_kw;
    Series wind_kw;
};

struct MwenSpec {
    std::string name;
    std::vector<GeneratorSpec> generators;
    std::vector<StorageSpec> storages;
    std::optional<WastewaterSpec> wastewater;
    std::optional<TreatmentSpec> treatment;
    std::vector<TankSpec> tanks;
    double tie_line_power_kw = 0;
    double tie_line_water_gph = 0;
    Profiles profiles;
};

struct GridCoupling {
    Series buy_price;   // $/kWh
    Series sell_price;  // $/kWh
    double tie_limit_kw = 0;
};

struct WaterMainCoupling {
    Series import_price;  // $/gal
    double tie_limit_gph = 0;
};

struct NetworkPrices {
    Series power;  // $/kWh
    Series water;  // $/gal
};

enum class TerminalSense { Equality, AtLeast };

struct PolicyParams {
    double final_energy_fraction = 0.5;
    double final_water_fraction = 0.5;
    double final_wastewater_fraction = 0.5;
    TerminalSense terminal_sense_storage = TerminalSense::Equality;
};

struct Scenario {
    int horizon_periods = 0;
    double dt_hours = 1.0;
    std::vector<MwenSpec> mwens;
    GridCoupling grid;
    WaterMainCoupling water_main;
    NetworkPrices network_prices;
    PolicyParams policies;
};

/// Parse failure classification: malformed text vs a well-formed document
/// that does not match the schema (missing/unknown/ill-typed fields).
class ScenarioParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, Schema };
    ScenarioParseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

struct Violation {
    std::string where;    // e.g. "mwens[0].storages[1].eta_charge"
    std::string message;  // the broken invariant with the offending value
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

Scenario parse_scenario(const std::string& document);
std::string serialize_scenario(const Scenario& s);
ValidationReport validate_scenario(const Scenario& s);

/// 4-MWEN, 24-period test system; deterministic synthetic profiles.
Scenario builtin_case_study();
/// 2-MWEN, 6-period cut-down of the case study for fast end-to-end runs.
Scenario builtin_reduced();
/// Lookup by name ("paper_4mwen", "reduced_2mwen"); throws on unknown names.
Scenario builtin_scenario(const std::string& name);

}  // namespace wen
