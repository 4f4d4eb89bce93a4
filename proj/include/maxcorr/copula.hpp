#pragma once

// Correlated-default simulation by thresholding latent variables: Gaussian
// single-factor and full-matrix forms, threshold calibration, the mapping
// from asset to default correlation, and the analytic 100%-correlation limit.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "maxcorr/ladder.hpp"
#include "maxcorr/portfolio.hpp"
#include "maxcorr/scenario.hpp"

namespace maxcorr {

// Continuous strictly-increasing latent distribution. Any such family
// produces the same default law at 100% correlation; the logistic variant
// exists to demonstrate exactly that.
class LatentFamily {
public:
    virtual ~LatentFamily() = default;
    virtual double cdf(double x) const = 0;
    virtual double quantile(double p) const = 0;
    virtual const char* name() const = 0;
};

const LatentFamily& gaussian_family();
const LatentFamily& logistic_family();

// Either a flat single-factor correlation in [0,1] or a full symmetric
// positive semi-definite matrix with unit diagonal.
class AssetCorrelationSpec {
public:
    static AssetCorrelationSpec flat(double rho);
    static AssetCorrelationSpec full(Eigen::MatrixXd matrix);

    bool is_flat() const { return is_flat_; }
    double flat_rho() const;
    const Eigen::MatrixXd& matrix() const;

private:
    AssetCorrelationSpec() = default;
    bool is_flat_ = true;
    double rho_ = 0.0;
    Eigen::MatrixXd matrix_;
};

// c_i with P(X_i < c_i) = p_i under the standard normal; sorted portfolios
// give sorted thresholds. Degenerate marginals have no finite threshold.
Eigen::VectorXd calibrate_thresholds(const Portfolio& portfolio);

// Default correlation implied by Gaussian assets at correlation rho_asset
// for marginals (p_i, p_j). Exact at rho_asset in {0, 1}; elsewhere the
// bivariate normal orthant probability is integrated to 1e-10.
double asset_to_default_correlation(double p_i, double p_j, double rho_asset);

struct SimOptions {
    int threads = 0;                       // 0 = hardware default
    const LatentFamily* family = nullptr;  // nullptr = Gaussian
};

// Correlated-threshold simulation. Flat rho = 1 routes through the exact
// degenerate path (one uniform per draw); flat rho < 1 draws a common factor
// plus idiosyncratic normals; a full matrix is factorized once (Cholesky,
// with a 1e-12 diagonal lift retry for semidefinite inputs).
// A non-Gaussian latent family is only meaningful at flat rho = 1, where
// every continuous family yields the identical law; elsewhere it is refused.
std::vector<DefaultScenario> simulate_copula(const Portfolio& portfolio,
                                             const AssetCorrelationSpec& corr,
                                             std::uint64_t draws, std::uint64_t seed,
                                             const SimOptions& opts = {});

// Same draws, aggregated into counts per scenario mask (portfolio size <= 64).
std::map<std::uint64_t, std::uint64_t> simulate_copula_counts(
    const Portfolio& portfolio, const AssetCorrelationSpec& corr, std::uint64_t draws,
    std::uint64_t seed, const SimOptions& opts = {});

// Streaming form: fn(block_index, scenario_mask) for every draw, block by
// block. fn may be called concurrently for different blocks but sees each
// block's draws in order; per-block state plus an in-order merge reproduces
// any aggregate bit-for-bit regardless of thread count.
void simulate_copula_payoffs(
    const Portfolio& portfolio, const AssetCorrelationSpec& corr, std::uint64_t draws,
    std::uint64_t seed, int threads,
    const std::function<void(std::uint64_t, std::uint64_t)>& fn);

// The rho -> 1 limit in closed form: the unique maximal-correlation process.
LadderProcess degenerate_max_correlation(const Portfolio& portfolio);

// Exact scenario probabilities under the flat-correlation Gaussian model,
// by quadrature over the common factor (conditional independence). rho = 0
// gives exact products; rho = 1 gives the ladder table.
JointTable copula_scenario_table(const Portfolio& portfolio, double rho);

} // namespace maxcorr
