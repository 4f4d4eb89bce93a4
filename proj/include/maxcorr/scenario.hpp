#pragma once

// Terminal default scenarios and full scenario probability tables.
// Scenario indexing convention everywhere: name 1 is the least significant
// bit, so mask m has name i (1-based) defaulted iff bit (i-1) of m is set.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "maxcorr/portfolio.hpp"

namespace maxcorr {

// Largest pool enumerated exhaustively; beyond this, use Monte Carlo.
inline constexpr std::size_t kExhaustiveCutoff = 24;

struct DefaultScenario {
    std::vector<std::uint8_t> indicators; // 1 = defaulted

    DefaultScenario() = default;
    explicit DefaultScenario(std::vector<std::uint8_t> ind) : indicators(std::move(ind)) {}

    std::size_t size() const { return indicators.size(); }
    bool defaulted(std::size_t i) const { return indicators[i] != 0; }
    std::uint64_t mask() const;

    bool operator==(const DefaultScenario&) const = default;
    auto operator<=>(const DefaultScenario&) const = default;
};

DefaultScenario scenario_from_mask(std::uint64_t mask, std::size_t n_names);

// All 2^N scenarios in binary counting order (mask 0, 1, 2, ...).
// Refuses n_names > kExhaustiveCutoff.
std::vector<DefaultScenario> enumerate_scenarios(std::size_t n_names);

// Streaming form of the same enumeration for when materializing is wasteful.
void for_each_scenario_mask(std::size_t n_names,
                            const std::function<void(std::uint64_t)>& fn);

// Sum of N_i * lgd_i over defaulted names.
double portfolio_loss(const Portfolio& portfolio, const DefaultScenario& scenario);
double portfolio_loss(const Portfolio& portfolio, std::uint64_t mask);

// Full probability table over all 2^N scenarios, indexed by mask.
struct JointTable {
    std::size_t n_names = 0;
    std::vector<double> probs; // size 2^n_names

    double sum() const;
    // P(I_i = 1), zero-based i.
    double marginal(std::size_t i) const;
    // P(I_i = 1, I_j = 1).
    double joint_default(std::size_t i, std::size_t j) const;
    // Throws ValidationError on negative entries or a sum away from 1.
    void validate(double tol = 1e-10) const;
};

// Independent-defaults table from the portfolio marginals (exact products).
JointTable independence_table(const Portfolio& portfolio);

} // namespace maxcorr
