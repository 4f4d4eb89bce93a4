#pragma once

// Inverting the flat-correlation pricing map for a market quote. A quote
// above the 100%-correlation model price cannot be matched by any consistent
// default process; that is reported as a status, never as a rho beyond 1.

#include <cstdint>
#include <string>

#include "maxcorr/portfolio.hpp"
#include "maxcorr/pricing.hpp"

namespace maxcorr {

enum class CalibrationStatus {
    Solved,     // a rho in [0,1] reproduces the quote
    Breakdown,  // quote exceeds the maximal-correlation price
    BelowRange, // quote undercuts the zero-correlation price
};

const char* to_string(CalibrationStatus status);

struct CalibrationResult {
    CalibrationStatus status = CalibrationStatus::Solved;
    double rho = 0.0;          // meaningful when status == Solved
    double price_at_zero = 0.0;
    double price_at_one = 0.0; // analytic ladder price, exact
    double market_price = 0.0;
    int iterations = 0;
    Valuation::Method interior_method = Valuation::Method::Exhaustive;
};

struct ImpliedConfig {
    // Bisection stops at |d rho| <= rho_tol or |model - market| <= price_tol
    // (exhaustive) / 2x the Monte Carlo standard error (MC).
    double rho_tol = 1e-7;
    double price_tol = 1e-10;
    // Interior pricing is exhaustive up to the enumeration cutoff, Monte
    // Carlo beyond it (or when forced).
    bool force_mc = false;
    std::uint64_t mc_draws = 1'000'000;
    std::uint64_t seed = 0;
    int threads = 0;
};

// Bisection on rho in [0,1] against the model price of a supersenior
// tranche, using monotonicity of that price in rho. The rho = 1 endpoint is
// always the analytic ladder value, so breakdown detection is exact.
CalibrationResult implied_flat_correlation(const Portfolio& portfolio,
                                           const TrancheSpec& tranche,
                                           double market_price,
                                           const ImpliedConfig& config = {});

// Calibration plus a human-readable diagnosis of the excess premium and,
// under breakdown, a pointer to the arbitrage construction.
struct BreakdownReport {
    CalibrationResult calibration;
    double excess_premium = 0.0; // max(market - price_at_one, 0)
    std::string diagnosis;
};

BreakdownReport breakdown_report(const Portfolio& portfolio, const TrancheSpec& tranche,
                                 double market_price, const ImpliedConfig& config = {});

} // namespace maxcorr
