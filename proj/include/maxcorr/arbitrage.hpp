#pragma once

// The three-leg position that locks in a breakdown premium: sell supersenior
// protection at attachment A, buy single-name protection on the least risky
// names in the amounts fixed by the attachment decomposition.

#include <cstdint>
#include <vector>

#include "maxcorr/portfolio.hpp"
#include "maxcorr/scenario.hpp"

namespace maxcorr {

// A = sum of loss capacities of names pivot+1..N plus epsilon times the
// pivot's capacity, epsilon in (0,1]. pivot is 1-based into the sorted
// portfolio. When A lands exactly on a rung boundary the larger pivot with
// epsilon = 1 is taken.
struct AttachmentDecomposition {
    std::size_t pivot = 0;
    double epsilon = 0.0;
};

// stress_lgd decomposes against unit-LGD capacities (N_i instead of
// N_i * lgd_i): protection against the possibility that realized recoveries
// are lower than assumed. The legs become larger and costlier.
AttachmentDecomposition decompose_attachment(const Portfolio& portfolio,
                                             double attachment,
                                             bool stress_lgd = false);

struct CdsLeg {
    std::size_t name_index = 0; // 0-based into the sorted portfolio
    double units = 0.0;         // bought protection, units of the name's CDS
};

struct ArbitragePortfolio {
    Portfolio reference;
    double attachment = 0.0;
    AttachmentDecomposition decomposition;
    std::vector<CdsLeg> cds_legs; // names 1..pivot-1 at N_i, pivot at (1-eps)N_pivot
    bool stressed_lgd = false;
};

ArbitragePortfolio build_arbitrage_portfolio(const Portfolio& portfolio,
                                             double attachment,
                                             bool stress_lgd = false);

// Terminal value in a scenario: protection payments received on the CDS legs
// minus the tranche loss paid out. Zero in every ladder scenario, positive
// when a hedged name defaults without the whole risky tail defaulting.
double terminal_value(const ArbitragePortfolio& arb, const DefaultScenario& scenario);
double terminal_value(const ArbitragePortfolio& arb, std::uint64_t mask);

struct MaturityReport {
    double min_value = 0.0;
    double max_value = 0.0;
    std::uint64_t min_scenario = 0; // masks of the extremes
    std::uint64_t max_scenario = 0;
    std::uint64_t profitable_scenarios = 0; // strictly positive value
    std::uint64_t total_scenarios = 0;

    bool non_negative(double tol = 1e-12) const { return min_value >= -tol; }
};

// Exhaustive sweep of all 2^N scenarios (subject to the enumeration cutoff).
MaturityReport verify_nonnegative_maturity(const ArbitragePortfolio& arb,
                                           int threads = 0);

// Cost of entering the position: premiums paid on the CDS legs minus the
// premium received for the tranche. Zero at the maximal-correlation fair
// price; negative under breakdown (the market pays us to hold it).
double initial_value(const ArbitragePortfolio& arb, double tranche_market_price);

struct ArbitrageCertificate {
    bool issued = false;
    double guaranteed_profit = 0.0; // -initial value when issued
    double initial_value = 0.0;
    double cds_leg_cost = 0.0;      // sum of leg premiums
    double break_even_price = 0.0;  // tranche price at which entry is free
    MaturityReport maturity;
    ArbitragePortfolio portfolio;
};

// Issues iff the position is paid for up front (initial value < 0) and can
// never lose at maturity. The guaranteed profit floor is -initial value.
ArbitrageCertificate arbitrage_certificate(const Portfolio& portfolio, double attachment,
                                           double tranche_market_price,
                                           bool stress_lgd = false, int threads = 0);

} // namespace maxcorr
