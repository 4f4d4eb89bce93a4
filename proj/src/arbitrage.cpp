#include "maxcorr/arbitrage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "maxcorr/errors.hpp"
#include "maxcorr/parallel.hpp"
#include "maxcorr/pricing.hpp"
#include "maxcorr/rng.hpp"

namespace maxcorr {

namespace {

double capacity(const Obligor& o, bool stress_lgd) {
    return stress_lgd ? o.notional : o.loss_capacity();
}

} // namespace

AttachmentDecomposition decompose_attachment(const Portfolio& portfolio,
                                             double attachment, bool stress_lgd) {
    const std::size_t n = portfolio.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += capacity(portfolio.name(i), stress_lgd);
    if (!(attachment > 0.0) || attachment > total + 1e-12) {
        std::ostringstream msg;
        msg << "attachment " << attachment << " outside (0, " << total
            << "]: no decomposition exists";
        throw ValidationError(msg.str());
    }

    // Walk down from the riskiest name, accumulating tail capacity, until the
    // attachment falls inside the current rung. Zero-capacity names cannot
    // carry any of the attachment and are skipped.
    double tail = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const double cap = capacity(portfolio.name(k), stress_lgd);
        if (cap == 0.0) continue;
        if (attachment <= tail + cap + 1e-12) {
            // Snap to the rung boundary: an attachment within tolerance of
            // the full rung takes epsilon exactly 1 (never 0 one rung up).
            const double eps = tail + cap - attachment <= 1e-12
                                   ? 1.0
                                   : (attachment - tail) / cap;
            return AttachmentDecomposition{k + 1, eps};
        }
        tail += cap;
    }
    throw ValidationError("attachment decomposition failed unexpectedly");
}

ArbitragePortfolio build_arbitrage_portfolio(const Portfolio& portfolio,
                                             double attachment, bool stress_lgd) {
    const AttachmentDecomposition decomp =
        decompose_attachment(portfolio, attachment, stress_lgd);
    ArbitragePortfolio arb{portfolio, attachment, decomp, {}, stress_lgd};
    const std::size_t pivot0 = decomp.pivot - 1; // 0-based
    for (std::size_t i = 0; i < pivot0; ++i) {
        arb.cds_legs.push_back({i, portfolio.name(i).notional});
    }
    const double pivot_units = (1.0 - decomp.epsilon) * portfolio.name(pivot0).notional;
    if (pivot_units != 0.0) {
        arb.cds_legs.push_back({pivot0, pivot_units});
    }
    return arb;
}

double terminal_value(const ArbitragePortfolio& arb, const DefaultScenario& scenario) {
    if (scenario.size() != arb.reference.size()) {
        throw ValidationError("scenario size does not match arbitrage portfolio");
    }
    return terminal_value(arb, scenario.mask());
}

double terminal_value(const ArbitragePortfolio& arb, std::uint64_t mask) {
    double received = 0.0;
    for (const auto& leg : arb.cds_legs) {
        if ((mask >> leg.name_index) & 1u) {
            received += leg.units * arb.reference.name(leg.name_index).lgd;
        }
    }
    const double loss = portfolio_loss(arb.reference, mask);
    const double tranche_paid = std::max(loss - arb.attachment, 0.0);
    return received - tranche_paid;
}

MaturityReport verify_nonnegative_maturity(const ArbitragePortfolio& arb, int threads) {
    const std::size_t n = arb.reference.size();
    if (n > kExhaustiveCutoff) {
        throw ValidationError("maturity verification: exhaustive cutoff exceeded");
    }
    const std::uint64_t count = std::uint64_t{1} << n;

    MaturityReport total;
    total.total_scenarios = count;
    const std::uint64_t n_blocks = (count + kDrawBlockSize - 1) / kDrawBlockSize;
    std::vector<MaturityReport> per_block(n_blocks);
    for_each_block(count, kDrawBlockSize, threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       MaturityReport& r = per_block[block];
                       r.min_value = r.max_value = terminal_value(arb, lo);
                       r.min_scenario = r.max_scenario = lo;
                       for (std::uint64_t m = lo; m < hi; ++m) {
                           const double v = terminal_value(arb, m);
                           if (v < r.min_value) {
                               r.min_value = v;
                               r.min_scenario = m;
                           }
                           if (v > r.max_value) {
                               r.max_value = v;
                               r.max_scenario = m;
                           }
                           if (v > 0.0) ++r.profitable_scenarios;
                       }
                   });
    total.min_value = per_block[0].min_value;
    total.max_value = per_block[0].max_value;
    total.min_scenario = per_block[0].min_scenario;
    total.max_scenario = per_block[0].max_scenario;
    for (const auto& r : per_block) {
        if (r.min_value < total.min_value) {
            total.min_value = r.min_value;
            total.min_scenario = r.min_scenario;
        }
        if (r.max_value > total.max_value) {
            total.max_value = r.max_value;
            total.max_scenario = r.max_scenario;
        }
        total.profitable_scenarios += r.profitable_scenarios;
    }
    return total;
}

double initial_value(const ArbitragePortfolio& arb, double tranche_market_price) {
    double leg_cost = 0.0;
    for (const auto& leg : arb.cds_legs) {
        leg_cost += leg.units * price_single_name_cds(arb.reference.name(leg.name_index)).value;
    }
    return leg_cost - tranche_market_price;
}

ArbitrageCertificate arbitrage_certificate(const Portfolio& portfolio, double attachment,
                                           double tranche_market_price, bool stress_lgd,
                                           int threads) {
    ArbitrageCertificate cert{
        false, 0.0, 0.0, 0.0, 0.0, {},
        build_arbitrage_portfolio(portfolio, attachment, stress_lgd)};
    for (const auto& leg : cert.portfolio.cds_legs) {
        cert.cds_leg_cost +=
            leg.units * price_single_name_cds(portfolio.name(leg.name_index)).value;
    }
    cert.break_even_price = cert.cds_leg_cost;
    cert.initial_value = cert.cds_leg_cost - tranche_market_price;
    cert.maturity = verify_nonnegative_maturity(cert.portfolio, threads);
    cert.issued = cert.initial_value < 0.0 && cert.maturity.non_negative();
    cert.guaranteed_profit = cert.issued ? -cert.initial_value : 0.0;
    return cert;
}

} // namespace maxcorr
