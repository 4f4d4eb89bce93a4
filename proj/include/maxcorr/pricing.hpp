#pragma once

// Risk-neutral valuation over a single period with up-front premium and zero
// rates: a product's fair value is its probability-weighted terminal payoff.

#include <cstdint>
#include <string>

#include "maxcorr/copula.hpp"
#include "maxcorr/ladder.hpp"
#include "maxcorr/portfolio.hpp"
#include "maxcorr/scenario.hpp"

namespace maxcorr {

struct TrancheSpec {
    enum class Kind { Supersenior, Equity };

    double attachment = 0.0;
    Kind kind = Kind::Supersenior;

    static TrancheSpec supersenior(double attachment);
    static TrancheSpec equity(double attachment);

    // Payoff at portfolio loss L: [L - A]+ for supersenior, min(L, A) for equity.
    double payoff(double loss) const;
};

struct Valuation {
    enum class Method { Exhaustive, MonteCarlo };

    double value = 0.0;
    double std_error = 0.0; // zero for exhaustive
    Method method = Method::Exhaustive;
    std::uint64_t draws = 0; // Monte Carlo only
    std::uint64_t seed = 0;  // Monte Carlo only

    const char* method_name() const {
        return method == Method::Exhaustive ? "exhaustive" : "monte-carlo";
    }
};

// Fair up-front premium per unit notional of the name: lgd * p.
Valuation price_single_name_cds(const Obligor& name);

// Expectation over a full scenario table (exact).
Valuation price_tranche_exhaustive(const Portfolio& portfolio, const TrancheSpec& tranche,
                                   const JointTable& law);

// Expectation over the N+1 ladder scenarios (exact, no 2^N enumeration).
Valuation price_tranche_exhaustive(const Portfolio& portfolio, const TrancheSpec& tranche,
                                   const LadderProcess& law);

// Sample-mean payoff under the copula law; standard error from the unbiased
// sample variance. Deterministic in (draws, seed) and thread count.
Valuation price_tranche_mc(const Portfolio& portfolio, const TrancheSpec& tranche,
                           const AssetCorrelationSpec& corr, std::uint64_t draws,
                           std::uint64_t seed, int threads = 0);

// equity(A) + supersenior(A) against the correlation-blind expected total
// loss. The identity holds pointwise, so the gap is pure float noise under
// any law.
struct ParityReport {
    double equity_value = 0.0;
    double supersenior_value = 0.0;
    double expected_total_loss = 0.0; // sum of N_i * lgd_i * p_i
    double gap = 0.0;                 // equity + supersenior - expected loss
};

ParityReport parity_check(const Portfolio& portfolio, double attachment,
                          const JointTable& law);
ParityReport parity_check(const Portfolio& portfolio, double attachment,
                          const LadderProcess& law);

} // namespace maxcorr
