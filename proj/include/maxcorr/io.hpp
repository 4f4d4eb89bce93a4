#pragma once

// File formats: portfolio CSV with header `label,default_prob,recovery,
// notional` (probabilities as decimals), correlation matrix CSV of N rows by
// N columns with no header. Lines starting with '#' are comments.

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "maxcorr/portfolio.hpp"

namespace maxcorr {

// Parse errors carry the 1-based line number.
Portfolio read_portfolio_csv(std::istream& in, const std::string& source_name = "<stream>");
Portfolio read_portfolio_csv_file(const std::string& path);

// Full-precision round-trippable output.
void write_portfolio_csv(std::ostream& out, const Portfolio& portfolio);

Eigen::MatrixXd read_matrix_csv(std::istream& in, const std::string& source_name = "<stream>");
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

} // namespace maxcorr
