#pragma once

#include <utility>
#include <vector>

#include "wen/nexus/model.hpp"
#include "wen/scenario.hpp"

namespace wen::pea {

enum class Resource { Power, Water };

/// One (member, period) cell of an exchange ledger. Sign convention:
/// positive = flow into the MWEN.
struct LedgerEntry {
    double net_exchange = 0;       // L^E, signed
    double network_exchange = 0;   // L^N, signed
    double external_import = 0;    // grid purchase / main-water import, >= 0
    double external_export = 0;    // grid sale, >= 0; always 0 for water
};

struct ExchangeLedger {
    Resource resource = Resource::Power;
    std::vector<std::vector<LedgerEntry>> entries;  // [m][t]

    int members() const { return static_cast<int>(entries.size()); }
    int horizon() const { return entries.empty() ? 0 : static_cast<int>(entries[0].size()); }
};

/// Pulls the resource's ledger out of a networked schedule.
ExchangeLedger extract_ledger(const nexus::Schedule& sched, Resource resource);

/// Checks the ledger invariants: per-cell accounting L^E = import - export + L^N,
/// network conservation per period, nonnegative external flows, and no external
/// water export. Returns a human-readable message per violation.
std::vector<std::string> check_ledger(const ExchangeLedger& ledger, double tol = 1e-6);

/// Splits signed exchanges into their positive and negative parts.
/// imports[m] = max(0, x[m]), exports[m] = min(0, x[m]).
void split_signed(const std::vector<double>& exchanges, std::vector<double>& imports,
                  std::vector<double>& exports);

struct PeriodRebalance {
    std::vector<double> network_exchange;  // L^N per member
    std::vector<double> external_import;   // per member, >= 0
    std::vector<double> external_export;   // per member, >= 0
    std::vector<double> share;             // L^N = share * L^E per member
    bool adjusted = false;                 // any member's split changed shape
};

/// One period of the proportional exchange pass. Whichever side of the market
/// is larger is scaled down pro rata to the smaller side; the shortfall or
/// surplus goes through the external connection.
PeriodRebalance rebalance_period(const std::vector<double>& exchanges);

struct PeaResult {
    ExchangeLedger before;
    ExchangeLedger after;
    std::vector<std::vector<double>> shares;  // [m][t]
    std::vector<bool> period_adjusted;        // [t]
};

/// Applies rebalance_period at every t of a networked schedule. Only the
/// exchange split (network vs external) changes; net exchanges and every
/// physical quantity are left untouched. Throws std::invalid_argument when the
/// pre-pass ledger violates its invariants.
std::pair<nexus::Schedule, PeaResult> apply_pea(const nexus::Schedule& sched, const Scenario& s,
                                                Resource resource);

}  // namespace wen::pea
