#pragma once

// Pairwise joint default probabilities implied by a default correlation,
// the admissibility bound on that correlation, and matrices that saturate it.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "maxcorr/portfolio.hpp"

namespace maxcorr {

// Tolerance for probability identities (marginals, sums, saturation).
inline constexpr double kProbTol = 1e-12;
// A symmetric matrix counts as positive semi-definite down to this eigenvalue.
inline constexpr double kPsdTol = 1e-10;

// The four outcome probabilities for a pair of names. p10 is "first name
// defaults, second survives".
struct PairwiseJointProbs {
    double p00 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
    double p11 = 0.0;

    double min_prob() const;
    // All four probabilities non-negative (within tol): the correlation that
    // produced them is consistent with some joint distribution.
    bool consistent(double tol = kProbTol) const { return min_prob() >= -tol; }
    // Throws InconsistentCorrelationError carrying the offending value.
    void require_consistent(double tol = kProbTol) const;
};

// Closed-form joint probabilities for marginals (p_i, p_j) and default
// correlation rho. Marginals must be strictly inside (0,1); degenerate
// marginals raise DegenerateMarginalError.
PairwiseJointProbs joint_default_probs(double p_i, double p_j, double rho);

// Largest default correlation admitting non-negative joint probabilities:
// min(sqrt(p_i q_j / (q_i p_j)), sqrt(q_i p_j / (p_i q_j))). Equals 1 iff
// p_i == p_j.
double correlation_upper_bound(double p_i, double p_j);

// Symmetric matrix of default correlations with unit diagonal, entries in
// [-1, 1]. Stored dense; validation happens at construction.
class DefaultCorrelationMatrix {
public:
    explicit DefaultCorrelationMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const { return entries_; }
    double operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

private:
    Eigen::MatrixXd entries_;
};

// The matrix that holds every pairwise bound as an equality for the given
// (sorted) portfolio. All marginals must be strictly inside (0,1).
DefaultCorrelationMatrix saturated_matrix(const Portfolio& portfolio);

struct BoundViolation {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;  // offending entry
    double bound = 0.0;  // admissible bound it exceeds (upper or lower)
};

// Outcome of checking a correlation matrix against a portfolio. The entry
// bound and eigenvalue positivity are independent checks: neither implies
// the other.
struct MatrixValidationReport {
    std::vector<BoundViolation> violations;
    double min_eigenvalue = 0.0;
    bool positive_semi_definite = false;

    bool bounds_ok() const { return violations.empty(); }
    bool valid() const { return bounds_ok() && positive_semi_definite; }
};

MatrixValidationReport validate_matrix(const Portfolio& portfolio,
                                       const DefaultCorrelationMatrix& matrix);

namespace detail {
// Most negative admissible correlation, from P(0,0) >= 0 and P(1,1) >= 0.
// Reported in validation but rarely binding for credit work.
double correlation_lower_bound(double p_i, double p_j);
} // namespace detail

} // namespace maxcorr
