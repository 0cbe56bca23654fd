#include "wen/pea.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wen::pea {

namespace {

std::string cell(int m, int t) {
    return "[m=" + std::to_string(m) + ",t=" + std::to_string(t) + "]";
}

}  // namespace

ExchangeLedger extract_ledger(const nexus::Schedule& sched, Resource resource) {
    ExchangeLedger ledger;
    ledger.resource = resource;
    ledger.entries.resize(sched.mwens.size());
    for (size_t m = 0; m < sched.mwens.size(); ++m) {
        const auto& mw = sched.mwens[m];
        auto& row = ledger.entries[m];
        row.resize(static_cast<size_t>(sched.horizon));
        for (int t = 0; t < sched.horizon; ++t) {
            auto& e = row[static_cast<size_t>(t)];
            if (resource == Resource::Power) {
                e.net_exchange = mw.pe[static_cast<size_t>(t)];
                e.network_exchange = mw.pn[static_cast<size_t>(t)];
                e.external_import = mw.pgrid_imp[static_cast<size_t>(t)];
                e.external_export = mw.pgrid_exp[static_cast<size_t>(t)];
            } else {
                e.net_exchange = mw.we[static_cast<size_t>(t)];
                e.network_exchange = mw.wn[static_cast<size_t>(t)];
                e.external_import = mw.wmain[static_cast<size_t>(t)];
                e.external_export = 0;
            }
        }
    }
    return ledger;
}

std::vector<std::string> check_ledger(const ExchangeLedger& ledger, double tol) {
    std::vector<std::string> bad;
    const int M = ledger.members();
    const int T = ledger.horizon();
    for (int m = 0; m < M; ++m) {
        if (static_cast<int>(ledger.entries[static_cast<size_t>(m)].size()) != T) {
            bad.push_back("member " + std::to_string(m) + ": ragged horizon");
            return bad;
        }
    }
    for (int t = 0; t < T; ++t) {
        double net_sum = 0;
        for (int m = 0; m < M; ++m) {
            const auto& e = ledger.entries[static_cast<size_t>(m)][static_cast<size_t>(t)];
            if (e.external_import < -tol)
                bad.push_back("external_import" + cell(m, t) + " negative");
            if (e.external_export < -tol)
                bad.push_back("external_export" + cell(m, t) + " negative");
            if (ledger.resource == Resource::Water && std::abs(e.external_export) > tol)
                bad.push_back("external_export" + cell(m, t) + " nonzero for water");
            double gap = e.net_exchange -
                         (e.external_import - e.external_export + e.network_exchange);
            if (std::abs(gap) > tol)
                bad.push_back("accounting" + cell(m, t) + " off by " + std::to_string(gap));
            net_sum += e.network_exchange;
        }
        if (std::abs(net_sum) > tol)
            bad.push_back("network exchanges at t=" + std::to_string(t) + " sum to " +
                          std::to_string(net_sum));
    }
    return bad;
}

void split_signed(const std::vector<double>& exchanges, std::vector<double>& imports,
                  std::vector<double>& exports) {
    imports.assign(exchanges.size(), 0.0);
    exports.assign(exchanges.size(), 0.0);
    for (size_t m = 0; m < exchanges.size(); ++m) {
        if (exchanges[m] > 0)
            imports[m] = exchanges[m];
        else
            exports[m] = exchanges[m];
    }
}

PeriodRebalance rebalance_period(const std::vector<double>& exchanges) {
    const size_t M = exchanges.size();
    PeriodRebalance r;
    r.network_exchange.assign(M, 0.0);
    r.external_import.assign(M, 0.0);
    r.external_export.assign(M, 0.0);
    r.share.assign(M, 1.0);

    std::vector<double> imports, exports;
    split_signed(exchanges, imports, exports);
    double imp_total = 0, exp_total = 0;
    for (size_t m = 0; m < M; ++m) {
        imp_total += imports[m];
        exp_total += -exports[m];
    }

    if (imp_total > exp_total) {
        // importers scaled down to what exporters offer; shortfall bought externally
        double scale = exp_total / imp_total;  // imp_total > 0 here
        for (size_t m = 0; m < M; ++m) {
            if (exchanges[m] > 0) {
                r.share[m] = scale;
                r.network_exchange[m] = exchanges[m] * scale;
                r.external_import[m] = exchanges[m] - r.network_exchange[m];
            } else {
                r.network_exchange[m] = exchanges[m];
            }
        }
        r.adjusted = true;
    } else if (imp_total < exp_total) {
        // exporters scaled down to what importers take; surplus sold externally
        double scale = imp_total / exp_total;  // exp_total > 0 here
        for (size_t m = 0; m < M; ++m) {
            if (exchanges[m] < 0) {
                r.share[m] = scale;
                r.network_exchange[m] = exchanges[m] * scale;
                r.external_export[m] = std::abs(exchanges[m] - r.network_exchange[m]);
            } else {
                r.network_exchange[m] = exchanges[m];
            }
        }
        r.adjusted = true;
    } else {
        // balanced market: everything clears through the network
        r.network_exchange = exchanges;
    }
    return r;
}

std::pair<nexus::Schedule, PeaResult> apply_pea(const nexus::Schedule& sched, const Scenario& s,
                                                Resource resource) {
    if (sched.mode != nexus::Mode::Networked)
        throw std::invalid_argument("apply_pea: schedule is not from a networked solve");
    if (sched.mwens.size() != s.mwens.size())
        throw std::invalid_argument("apply_pea: schedule does not match the scenario");

    PeaResult result;
    result.before = extract_ledger(sched, resource);
    auto bad = check_ledger(result.before);
    if (!bad.empty())
        throw std::invalid_argument("apply_pea: ledger invariant violated: " + bad.front());

    const int M = result.before.members();
    const int T = result.before.horizon();
    nexus::Schedule out = sched;
    result.after = result.before;
    result.shares.assign(static_cast<size_t>(M), std::vector<double>(static_cast<size_t>(T), 1.0));
    result.period_adjusted.assign(static_cast<size_t>(T), false);

    std::vector<double> exchanges(static_cast<size_t>(M));
    for (int t = 0; t < T; ++t) {
        for (int m = 0; m < M; ++m)
            exchanges[static_cast<size_t>(m)] =
                result.before.entries[static_cast<size_t>(m)][static_cast<size_t>(t)].net_exchange;
        PeriodRebalance r = rebalance_period(exchanges);
        if (resource == Resource::Water) {
            for (int m = 0; m < M; ++m)
                if (r.external_export[static_cast<size_t>(m)] != 0.0)
                    throw std::invalid_argument(
                        "apply_pea: water rebalance would require a main-system export at " +
                        cell(m, t));
        }
        result.period_adjusted[static_cast<size_t>(t)] = r.adjusted;
        for (int m = 0; m < M; ++m) {
            auto& e = result.after.entries[static_cast<size_t>(m)][static_cast<size_t>(t)];
            e.network_exchange = r.network_exchange[static_cast<size_t>(m)];
            e.external_import = r.external_import[static_cast<size_t>(m)];
            e.external_export = r.external_export[static_cast<size_t>(m)];
            result.shares[static_cast<size_t>(m)][static_cast<size_t>(t)] =
                r.share[static_cast<size_t>(m)];
            auto& mw = out.mwens[static_cast<size_t>(m)];
            if (resource == Resource::Power) {
                mw.pn[static_cast<size_t>(t)] = e.network_exchange;
                mw.pgrid_imp[static_cast<size_t>(t)] = e.external_import;
                mw.pgrid_exp[static_cast<size_t>(t)] = e.external_export;
            } else {
                mw.wn[static_cast<size_t>(t)] = e.network_exchange;
                mw.wmain[static_cast<size_t>(t)] = e.external_import;
            }
        }
    }
    return {std::move(out), std::move(result)};
}

}  // namespace wen::pea
