#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace maxcorr {

// One reference entity. Probabilities are decimals over the common horizon,
// the notional is a fraction of total portfolio notional.
struct Obligor {
    std::string label;
    double default_prob = 0.0;
    double recovery = 0.0;
    double lgd = 1.0; // 1 - recovery, stored explicitly
    double notional = 0.0;

    Obligor() = default;
    Obligor(std::string label_, double default_prob_, double recovery_, double notional_);

    double survival_prob() const { return 1.0 - default_prob; }
    // Maximum loss this name can inflict, as a fraction of portfolio notional.
    double loss_capacity() const { return notional * lgd; }
};

// Ordered pool of obligors. Construction validates each name and stable-sorts
// by default probability (non-decreasing), so equal-probability names keep
// their input order. All downstream indexing refers to this sorted order.
class Portfolio {
public:
    explicit Portfolio(std::vector<Obligor> names);

    const std::vector<Obligor>& names() const { return names_; }
    const Obligor& name(std::size_t i) const { return names_[i]; }
    std::size_t size() const { return names_.size(); }

    Eigen::VectorXd default_probs() const;
    Eigen::VectorXd loss_capacities() const;

    // Sum of N_i * lgd_i: the largest loss any scenario can produce.
    double total_loss_capacity() const;
    double total_notional() const;

    // Expected portfolio loss, sum of N_i * lgd_i * p_i. Depends only on the
    // marginals, so it is the same under every consistent default law.
    double expected_loss() const;

private:
    std::vector<Obligor> names_;
};

} // namespace maxcorr
