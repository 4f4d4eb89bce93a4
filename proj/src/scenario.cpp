#include "maxcorr/scenario.hpp"

#include <cmath>
#include <sstream>

#include "maxcorr/errors.hpp"

namespace maxcorr {

std::uint64_t DefaultScenario::mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < indicators.size(); ++i) {
        if (indicators[i]) m |= (std::uint64_t{1} << i);
    }
    return m;
}

DefaultScenario scenario_from_mask(std::uint64_t mask, std::size_t n_names) {
    std::vector<std::uint8_t> ind(n_names);
    for (std::size_t i = 0; i < n_names; ++i) {
        ind[i] = static_cast<std::uint8_t>((mask >> i) & 1u);
    }
    return DefaultScenario(std::move(ind));
}

namespace {

void check_cutoff(std::size_t n_names) {
    if (n_names > kExhaustiveCutoff) {
        std::ostringstream msg;
        msg << "exhaustive enumeration limited to " << kExhaustiveCutoff
            << " names (got " << n_names << "); use Monte Carlo pricing instead";
        throw ValidationError(msg.str());
    }
}

} // namespace

std::vector<DefaultScenario> enumerate_scenarios(std::size_t n_names) {
    check_cutoff(n_names);
    const std::uint64_t count = std::uint64_t{1} << n_names;
    std::vector<DefaultScenario> out;
    out.reserve(count);
    for (std::uint64_t m = 0; m < count; ++m) {
        out.push_back(scenario_from_mask(m, n_names));
    }
    return out;
}

void for_each_scenario_mask(std::size_t n_names,
                            const std::function<void(std::uint64_t)>& fn) {
    check_cutoff(n_names);
    const std::uint64_t count = std::uint64_t{1} << n_names;
    for (std::uint64_t m = 0; m < count; ++m) fn(m);
}

double portfolio_loss(const Portfolio& portfolio, const DefaultScenario& scenario) {
    if (scenario.size() != portfolio.size()) {
        std::ostringstream msg;
        msg << "scenario has " << scenario.size() << " indicators, portfolio has "
            << portfolio.size() << " names";
        throw ValidationError(msg.str());
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < portfolio.size(); ++i) {
        if (scenario.defaulted(i)) loss += portfolio.name(i).loss_capacity();
    }
    return loss;
}

double portfolio_loss(const Portfolio& portfolio, std::uint64_t mask) {
    double loss = 0.0;
    for (std::size_t i = 0; i < portfolio.size(); ++i) {
        if ((mask >> i) & 1u) loss += portfolio.name(i).loss_capacity();
    }
    return loss;
}

double JointTable::sum() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double JointTable::marginal(std::size_t i) const {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double s = 0.0;
    for (std::uint64_t m = 0; m < probs.size(); ++m) {
        if (m & bit) s += probs[m];
    }
    return s;
}

double JointTable::joint_default(std::size_t i, std::size_t j) const {
    const std::uint64_t bits = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
    double s = 0.0;
    for (std::uint64_t m = 0; m < probs.size(); ++m) {
        if ((m & bits) == bits) s += probs[m];
    }
    return s;
}

void JointTable::validate(double tol) const {
    if (n_names > kExhaustiveCutoff) {
        throw ValidationError("joint table too large; exhaustive cutoff exceeded");
    }
    if (probs.size() != (std::size_t{1} << n_names)) {
        throw ValidationError("joint table size is not 2^n_names");
    }
    for (std::uint64_t m = 0; m < probs.size(); ++m) {
        if (probs[m] < 0.0) {
            std::ostringstream msg;
            msg << "joint table entry " << m << " is negative (" << probs[m] << ")";
            throw ValidationError(msg.str());
        }
    }
    if (std::abs(sum() - 1.0) > tol) {
        std::ostringstream msg;
        msg << "joint table sums to " << sum() << ", expected 1 within " << tol;
        throw ValidationError(msg.str());
    }
}

JointTable independence_table(const Portfolio& portfolio) {
    const std::size_t n = portfolio.size();
    if (n > kExhaustiveCutoff) {
        throw ValidationError("independence table: exhaustive cutoff exceeded");
    }
    JointTable table;
    table.n_names = n;
    table.probs.assign(std::size_t{1} << n, 1.0);
    // Doubling pass: fold each name's (q, p) pair into the table.
    for (std::size_t i = 0; i < n; ++i) {
        const double p = portfolio.name(i).default_prob;
        const double q = 1.0 - p;
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t m = bit; m-- > 0;) {
            const double base = table.probs[m];
            table.probs[m | bit] = base * p;
            table.probs[m] = base * q;
        }
    }
    return table;
}

} // namespace maxcorr
