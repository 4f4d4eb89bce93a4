#include "maxcorr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "maxcorr/errors.hpp"

namespace maxcorr {

namespace {

void require_interior(double p, const char* which) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << which << " = " << p
            << " is degenerate: default correlation is undefined for a sure or "
               "impossible defaulter";
        throw DegenerateMarginalError(msg.str());
    }
}

} // namespace

double PairwiseJointProbs::min_prob() const {
    return std::min(std::min(p00, p01), std::min(p10, p11));
}

void PairwiseJointProbs::require_consistent(double tol) const {
    const double m = min_prob();
    if (m < -tol) {
        std::ostringstream msg;
        msg << "joint default probability " << m
            << " is negative: the default correlation exceeds its admissible bound";
        throw InconsistentCorrelationError(msg.str(), m);
    }
}

PairwiseJointProbs joint_default_probs(double p_i, double p_j, double rho) {
    require_interior(p_i, "p_i");
    require_interior(p_j, "p_j");
    if (!(rho >= -1.0 && rho <= 1.0)) {
        std::ostringstream msg;
        msg << "default correlation " << rho << " outside [-1, 1]";
        throw ValidationError(msg.str());
    }
    const double q_i = 1.0 - p_i;
    const double q_j = 1.0 - p_j;
    const double cross = rho * std::sqrt(p_i * q_i * p_j * q_j);
    PairwiseJointProbs out;
    out.p00 = q_i * q_j + cross;
    out.p01 = q_i * p_j - cross;
    out.p10 = p_i * q_j - cross;
    out.p11 = p_i * p_j + cross;
    return out;
}

double correlation_upper_bound(double p_i, double p_j) {
    require_interior(p_i, "p_i");
    require_interior(p_j, "p_j");
    const double q_i = 1.0 - p_i;
    const double q_j = 1.0 - p_j;
    const double a = std::sqrt((p_i * q_j) / (q_i * p_j));
    const double b = std::sqrt((q_i * p_j) / (p_i * q_j));
    return std::min(a, b);
}

namespace detail {

double correlation_lower_bound(double p_i, double p_j) {
    require_interior(p_i, "p_i");
    require_interior(p_j, "p_j");
    const double q_i = 1.0 - p_i;
    const double q_j = 1.0 - p_j;
    const double a = std::sqrt((p_i * p_j) / (q_i * q_j));
    const double b = std::sqrt((q_i * q_j) / (p_i * p_j));
    return -std::min(a, b);
}

} // namespace detail

DefaultCorrelationMatrix::DefaultCorrelationMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw ValidationError("correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        if (entries_(i, i) != 1.0) {
            std::ostringstream msg;
            msg << "correlation matrix diagonal entry (" << i << "," << i << ") = "
                << entries_(i, i) << ", expected exactly 1";
            throw ValidationError(msg.str());
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            if (entries_(i, j) != entries_(j, i)) {
                std::ostringstream msg;
                msg << "correlation matrix is not symmetric at (" << i << "," << j << ")";
                throw ValidationError(msg.str());
            }
            if (!(entries_(i, j) >= -1.0 && entries_(i, j) <= 1.0)) {
                std::ostringstream msg;
                msg << "correlation matrix entry (" << i << "," << j << ") = "
                    << entries_(i, j) << " outside [-1, 1]";
                throw ValidationError(msg.str());
            }
        }
    }
}

DefaultCorrelationMatrix saturated_matrix(const Portfolio& portfolio) {
    const std::size_t n = portfolio.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Portfolio is sorted, so p_i <= p_j and the bound is the first branch.
            const double p_i = portfolio.name(i).default_prob;
            const double p_j = portfolio.name(j).default_prob;
            require_interior(p_i, "p_i");
            require_interior(p_j, "p_j");
            const double rho = std::sqrt((p_i * (1.0 - p_j)) / ((1.0 - p_i) * p_j));
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
        }
    }
    return DefaultCorrelationMatrix(std::move(m));
}

MatrixValidationReport validate_matrix(const Portfolio& portfolio,
                                       const DefaultCorrelationMatrix& matrix) {
    const std::size_t n = portfolio.size();
    if (matrix.size() != n) {
        std::ostringstream msg;
        msg << "matrix dimension " << matrix.size() << " does not match portfolio size "
            << n;
        throw ValidationError(msg.str());
    }
    MatrixValidationReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p_i = portfolio.name(i).default_prob;
            const double p_j = portfolio.name(j).default_prob;
            const double upper = correlation_upper_bound(p_i, p_j);
            const double lower = detail::correlation_lower_bound(p_i, p_j);
            const double value = matrix(i, j);
            if (value > upper + kProbTol) {
                report.violations.push_back({i, j, value, upper});
            } else if (value < lower - kProbTol) {
                report.violations.push_back({i, j, value, lower});
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.entries(),
                                                          Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    report.positive_semi_definite = report.min_eigenvalue >= -kPsdTol;
    return report;
}

} // namespace maxcorr
