#include "maxcorr/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxcorr/bounds.hpp"
#include "maxcorr/errors.hpp"
#include "maxcorr/parallel.hpp"
#include "maxcorr/rng.hpp"

namespace maxcorr {

LadderProcess::LadderProcess(Portfolio portfolio, Eigen::VectorXd scenario_probs)
    : portfolio_(std::move(portfolio)), scenario_probs_(std::move(scenario_probs)) {
    const auto n = static_cast<Eigen::Index>(portfolio_.size());
    if (scenario_probs_.size() != n + 1) {
        throw ValidationError("ladder process needs N+1 scenario probabilities");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
        if (scenario_probs_[i] < 0.0) {
            throw ValidationError("ladder scenario probability must be >= 0");
        }
        sum += scenario_probs_[i];
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        std::ostringstream msg;
        msg << "ladder scenario probabilities sum to " << sum << ", expected 1";
        throw ValidationError(msg.str());
    }
}

std::uint64_t LadderProcess::scenario_mask(std::size_t n_survivors) const {
    const std::size_t n = portfolio_.size();
    const std::uint64_t full =
        n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    const std::uint64_t alive = (std::uint64_t{1} << n_survivors) - 1;
    return full & ~alive;
}

DefaultScenario LadderProcess::scenario(std::size_t n_survivors) const {
    return scenario_from_mask(scenario_mask(n_survivors), portfolio_.size());
}

LadderProcess build_ladder(const Portfolio& portfolio) {
    const std::size_t n = portfolio.size();
    Eigen::VectorXd probs(static_cast<Eigen::Index>(n + 1));
    // P(first k survive, rest default) = p_{k+1} - p_k with p_0 = 0 and
    // p_{N+1} = 1; sorting makes every difference non-negative.
    for (std::size_t k = 0; k <= n; ++k) {
        const double upper = k == n ? 1.0 : portfolio.name(k).default_prob;
        const double lower = k == 0 ? 0.0 : portfolio.name(k - 1).default_prob;
        probs[static_cast<Eigen::Index>(k)] = upper - lower;
    }
    return LadderProcess(portfolio, std::move(probs));
}

LossDistribution ladder_loss_distribution(const LadderProcess& process) {
    const std::size_t n = process.size();
    std::vector<LossDistribution::Point> raw;
    raw.reserve(n + 1);
    // Loss of scenario k = capacity of the defaulted suffix; build as suffix
    // sums so equal levels are bitwise equal and merge cleanly.
    double suffix = 0.0;
    std::vector<double> losses(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        suffix += process.portfolio().name(k).loss_capacity();
        losses[k] = suffix;
    }
    for (std::size_t k = 0; k <= n; ++k) {
        raw.push_back({losses[k], process.scenario_prob(k)});
    }
    return LossDistribution::aggregate(raw);
}

JointTable ladder_joint_table(const LadderProcess& process) {
    const std::size_t n = process.size();
    if (n > kExhaustiveCutoff) {
        throw ValidationError("ladder joint table: exhaustive cutoff exceeded");
    }
    JointTable table;
    table.n_names = n;
    table.probs.assign(std::size_t{1} << n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        table.probs[process.scenario_mask(k)] += process.scenario_prob(k);
    }
    return table;
}

namespace {

// Survivors under draw u: names with p <= u stay alive. Portfolio is sorted,
// so that is a prefix; return its length via binary search.
std::size_t survivors_for_draw(const Eigen::VectorXd& probs, double u) {
    const double* begin = probs.data();
    const double* end = begin + probs.size();
    // First index with p > u; everything before it survives.
    return static_cast<std::size_t>(std::upper_bound(begin, end, u) - begin);
}

} // namespace

std::vector<DefaultScenario> simulate_ladder(const LadderProcess& process,
                                             std::uint64_t draws, std::uint64_t seed,
                                             int threads) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    const Eigen::VectorXd probs = process.portfolio().default_probs();
    std::vector<DefaultScenario> out(draws);
    for_each_block(draws, kDrawBlockSize, threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       Xoshiro256pp rng = block_stream(seed, block);
                       for (std::uint64_t d = lo; d < hi; ++d) {
                           const double u = rng.uniform01();
                           const std::size_t alive = survivors_for_draw(probs, u);
                           out[d] = process.scenario(alive);
                       }
                   });
    return out;
}

std::vector<std::uint64_t> simulate_ladder_counts(const LadderProcess& process,
                                                  std::uint64_t draws,
                                                  std::uint64_t seed, int threads) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    const Eigen::VectorXd probs = process.portfolio().default_probs();
    const std::size_t n = process.size();
    const std::uint64_t n_blocks = (draws + kDrawBlockSize - 1) / kDrawBlockSize;
    std::vector<std::vector<std::uint64_t>> per_block(
        n_blocks, std::vector<std::uint64_t>(n + 1, 0));
    for_each_block(draws, kDrawBlockSize, threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       Xoshiro256pp rng = block_stream(seed, block);
                       auto& counts = per_block[block];
                       for (std::uint64_t d = lo; d < hi; ++d) {
                           const double u = rng.uniform01();
                           counts[survivors_for_draw(probs, u)]++;
                       }
                   });
    std::vector<std::uint64_t> total(n + 1, 0);
    for (const auto& counts : per_block) {
        for (std::size_t k = 0; k <= n; ++k) total[k] += counts[k];
    }
    return total;
}

UniquenessReport verify_uniqueness(const JointTable& table, const Portfolio& portfolio) {
    const std::size_t n = portfolio.size();
    if (n > kExhaustiveCutoff) {
        throw ValidationError("verify_uniqueness: exhaustive cutoff exceeded");
    }
    table.validate(kUniquenessTol);
    if (table.n_names != n) {
        throw ValidationError("joint table dimension does not match portfolio");
    }

    UniquenessReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = std::abs(table.marginal(i) - portfolio.name(i).default_prob);
        report.max_marginal_error = std::max(report.max_marginal_error, err);
    }
    report.marginals_ok = report.max_marginal_error <= kUniquenessTol;

    // Saturated correlation is equivalent to P(both default) = min(p_i, p_j);
    // checking in probability space keeps the tolerance scale-free.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p_i = portfolio.name(i).default_prob;
            const double p_j = portfolio.name(j).default_prob;
            const double err =
                std::abs(table.joint_default(i, j) - std::min(p_i, p_j));
            report.max_saturation_error = std::max(report.max_saturation_error, err);
        }
    }
    report.saturation_ok = report.max_saturation_error <= kUniquenessTol;

    const JointTable ladder = ladder_joint_table(build_ladder(portfolio));
    for (std::size_t m = 0; m < table.probs.size(); ++m) {
        const double diff = std::abs(table.probs[m] - ladder.probs[m]);
        report.max_table_difference = std::max(report.max_table_difference, diff);
    }
    report.equals_ladder = report.max_table_difference <= kUniquenessTol;
    return report;
}

} // namespace maxcorr
