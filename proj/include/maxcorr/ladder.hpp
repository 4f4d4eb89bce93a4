#pragma once

// The unique default process that saturates every pairwise correlation
// bound: names default hierarchically, riskiest first. Scenario n keeps the
// n least risky names alive and defaults the rest, with probability
// p_{n+1} - p_n (p_0 = 0, p_{N+1} = 1).

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "maxcorr/loss_distribution.hpp"
#include "maxcorr/portfolio.hpp"
#include "maxcorr/scenario.hpp"

namespace maxcorr {

// Absolute per-entry tolerance for the uniqueness verification.
inline constexpr double kUniquenessTol = 1e-10;

class LadderProcess {
public:
    LadderProcess(Portfolio portfolio, Eigen::VectorXd scenario_probs);

    const Portfolio& portfolio() const { return portfolio_; }
    // Index n = number of surviving names, n = 0..N.
    const Eigen::VectorXd& scenario_probs() const { return scenario_probs_; }
    double scenario_prob(std::size_t n_survivors) const {
        return scenario_probs_[static_cast<Eigen::Index>(n_survivors)];
    }
    std::size_t size() const { return portfolio_.size(); }

    // Scenario with the first n_survivors names alive and the rest defaulted.
    std::uint64_t scenario_mask(std::size_t n_survivors) const;
    DefaultScenario scenario(std::size_t n_survivors) const;

private:
    Portfolio portfolio_;
    Eigen::VectorXd scenario_probs_;
};

LadderProcess build_ladder(const Portfolio& portfolio);

// Exact loss distribution over the N+1 ladder scenarios. Equal loss levels
// merge; zero-probability scenarios drop out.
LossDistribution ladder_loss_distribution(const LadderProcess& process);

// Full 2^N table with the ladder probabilities on the hierarchical scenarios
// and zero elsewhere. Subject to the exhaustive cutoff.
JointTable ladder_joint_table(const LadderProcess& process);

// One uniform draw decides everything: every name whose default probability
// exceeds the draw defaults (strict, so p = 0 never defaults).
std::vector<DefaultScenario> simulate_ladder(const LadderProcess& process,
                                             std::uint64_t draws, std::uint64_t seed,
                                             int threads = 0);

// Same sampler, returning counts by number of survivors (size N+1).
std::vector<std::uint64_t> simulate_ladder_counts(const LadderProcess& process,
                                                  std::uint64_t draws,
                                                  std::uint64_t seed, int threads = 0);

// Constructive uniqueness check: a full joint table that reproduces the
// marginals and the saturated correlations must be the ladder table.
struct UniquenessReport {
    bool marginals_ok = false;
    bool saturation_ok = false;
    bool equals_ladder = false;
    double max_marginal_error = 0.0;
    // |P(both default) - min(p_i, p_j)|, the probability-space form of the
    // saturated-correlation condition.
    double max_saturation_error = 0.0;
    double max_table_difference = 0.0;

    // True iff the table passed both characterization checks and, as the
    // theory then demands, coincides with the ladder table.
    bool is_unique_ladder() const {
        return marginals_ok && saturation_ok && equals_ladder;
    }
};

UniquenessReport verify_uniqueness(const JointTable& table, const Portfolio& portfolio);

} // namespace maxcorr
