#include "maxcorr/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "maxcorr/errors.hpp"
#include "maxcorr/parallel.hpp"
#include "maxcorr/rng.hpp"

namespace maxcorr {

TrancheSpec TrancheSpec::supersenior(double attachment) {
    if (!(attachment >= 0.0)) throw ValidationError("attachment must be >= 0");
    return TrancheSpec{attachment, Kind::Supersenior};
}

TrancheSpec TrancheSpec::equity(double attachment) {
    if (!(attachment >= 0.0)) throw ValidationError("attachment must be >= 0");
    return TrancheSpec{attachment, Kind::Equity};
}

double TrancheSpec::payoff(double loss) const {
    if (kind == Kind::Supersenior) return std::max(loss - attachment, 0.0);
    return std::min(loss, attachment);
}

Valuation price_single_name_cds(const Obligor& name) {
    Valuation v;
    v.value = name.lgd * name.default_prob;
    return v;
}

Valuation price_tranche_exhaustive(const Portfolio& portfolio, const TrancheSpec& tranche,
                                   const JointTable& law) {
    law.validate();
    if (law.n_names != portfolio.size()) {
        throw ValidationError("scenario table does not match portfolio size");
    }
    double value = 0.0;
    for (std::uint64_t m = 0; m < law.probs.size(); ++m) {
        if (law.probs[m] == 0.0) continue;
        value += law.probs[m] * tranche.payoff(portfolio_loss(portfolio, m));
    }
    Valuation v;
    v.value = value;
    return v;
}

Valuation price_tranche_exhaustive(const Portfolio& portfolio, const TrancheSpec& tranche,
                                   const LadderProcess& law) {
    const std::size_t n = portfolio.size();
    // Suffix capacities give the loss of each ladder scenario directly.
    double value = 0.0;
    double suffix = 0.0;
    std::vector<double> losses(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        suffix += portfolio.name(k).loss_capacity();
        losses[k] = suffix;
    }
    for (std::size_t k = 0; k <= n; ++k) {
        value += law.scenario_prob(k) * tranche.payoff(losses[k]);
    }
    Valuation v;
    v.value = value;
    return v;
}

Valuation price_tranche_mc(const Portfolio& portfolio, const TrancheSpec& tranche,
                           const AssetCorrelationSpec& corr, std::uint64_t draws,
                           std::uint64_t seed, int threads) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    const std::uint64_t n_blocks = (draws + kDrawBlockSize - 1) / kDrawBlockSize;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sumsq(n_blocks, 0.0);

    // One pass over the draws, payoff accumulated per block; scenarios are
    // not materialized. Uses the same draw engine as simulate_copula.
    const std::size_t n = portfolio.size();
    if (n > 64) throw ValidationError("simulation supports at most 64 names");
    struct PayoffSink {
        const Portfolio& portfolio;
        const TrancheSpec& tranche;
        double operator()(std::uint64_t mask) const {
            return tranche.payoff(portfolio_loss(portfolio, mask));
        }
    };
    const PayoffSink payoff{portfolio, tranche};
    simulate_copula_payoffs(portfolio, corr, draws, seed, threads,
                            [&](std::uint64_t block, std::uint64_t mask) {
                                const double x = payoff(mask);
                                block_sum[block] += x;
                                block_sumsq[block] += x * x;
                            });

    const double total = pairwise_sum(block_sum);
    const double total_sq = pairwise_sum(block_sumsq);
    const double mean = total / static_cast<double>(draws);

    Valuation v;
    v.value = mean;
    v.method = Valuation::Method::MonteCarlo;
    v.draws = draws;
    v.seed = seed;
    if (draws > 1) {
        const double nd = static_cast<double>(draws);
        const double var = std::max(0.0, (total_sq - nd * mean * mean) / (nd - 1.0));
        v.std_error = std::sqrt(var / nd);
    }
    return v;
}

namespace {

ParityReport make_parity(const Portfolio& portfolio, double equity_value,
                         double supersenior_value) {
    ParityReport report;
    report.equity_value = equity_value;
    report.supersenior_value = supersenior_value;
    report.expected_total_loss = portfolio.expected_loss();
    report.gap = equity_value + supersenior_value - report.expected_total_loss;
    return report;
}

} // namespace

ParityReport parity_check(const Portfolio& portfolio, double attachment,
                          const JointTable& law) {
    const double eq =
        price_tranche_exhaustive(portfolio, TrancheSpec::equity(attachment), law).value;
    const double ss =
        price_tranche_exhaustive(portfolio, TrancheSpec::supersenior(attachment), law)
            .value;
    return make_parity(portfolio, eq, ss);
}

ParityReport parity_check(const Portfolio& portfolio, double attachment,
                          const LadderProcess& law) {
    const double eq =
        price_tranche_exhaustive(portfolio, TrancheSpec::equity(attachment), law).value;
    const double ss =
        price_tranche_exhaustive(portfolio, TrancheSpec::supersenior(attachment), law)
            .value;
    return make_parity(portfolio, eq, ss);
}

} // namespace maxcorr
