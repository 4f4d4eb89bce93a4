#include "maxcorr/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "maxcorr/bounds.hpp"
#include "maxcorr/errors.hpp"
#include "maxcorr/normal.hpp"
#include "maxcorr/parallel.hpp"
#include "maxcorr/quadrature.hpp"
#include "maxcorr/rng.hpp"

namespace maxcorr {

namespace {

class GaussianLatent final : public LatentFamily {
public:
    double cdf(double x) const override { return norm_cdf(x); }
    double quantile(double p) const override { return norm_quantile(p); }
    const char* name() const override { return "gaussian"; }
};

class LogisticLatent final : public LatentFamily {
public:
    double cdf(double x) const override { return 1.0 / (1.0 + std::exp(-x)); }
    double quantile(double p) const override {
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        if (p >= 1.0) return std::numeric_limits<double>::infinity();
        return std::log(p / (1.0 - p));
    }
    const char* name() const override { return "logistic"; }
};

} // namespace

const LatentFamily& gaussian_family() {
    static const GaussianLatent family;
    return family;
}

const LatentFamily& logistic_family() {
    static const LogisticLatent family;
    return family;
}

AssetCorrelationSpec AssetCorrelationSpec::flat(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        std::ostringstream msg;
        msg << "flat asset correlation " << rho << " outside [0, 1]";
        throw ValidationError(msg.str());
    }
    AssetCorrelationSpec spec;
    spec.is_flat_ = true;
    spec.rho_ = rho;
    return spec;
}

AssetCorrelationSpec AssetCorrelationSpec::full(Eigen::MatrixXd matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw ValidationError("asset correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        if (matrix(i, i) != 1.0) {
            throw ValidationError("asset correlation matrix diagonal must be exactly 1");
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            if (matrix(i, j) != matrix(j, i)) {
                throw ValidationError("asset correlation matrix must be symmetric");
            }
            if (!(matrix(i, j) >= -1.0 && matrix(i, j) <= 1.0)) {
                throw ValidationError("asset correlation entries must lie in [-1, 1]");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol) {
        std::ostringstream msg;
        msg << "asset correlation matrix is not positive semi-definite "
            << "(smallest eigenvalue " << min_eig << ")";
        throw ValidationError(msg.str());
    }
    AssetCorrelationSpec spec;
    spec.is_flat_ = false;
    spec.matrix_ = std::move(matrix);
    return spec;
}

double AssetCorrelationSpec::flat_rho() const {
    if (!is_flat_) throw ValidationError("correlation spec holds a full matrix");
    return rho_;
}

const Eigen::MatrixXd& AssetCorrelationSpec::matrix() const {
    if (is_flat_) throw ValidationError("correlation spec holds a flat value");
    return matrix_;
}

Eigen::VectorXd calibrate_thresholds(const Portfolio& portfolio) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(portfolio.size()));
    for (std::size_t i = 0; i < portfolio.size(); ++i) {
        const double p = portfolio.name(i).default_prob;
        if (!(p > 0.0 && p < 1.0)) {
            std::ostringstream msg;
            msg << "obligor '" << portfolio.name(i).label << "': p = " << p
                << " has no finite threshold";
            throw DegenerateMarginalError(msg.str());
        }
        c[static_cast<Eigen::Index>(i)] = norm_quantile(p);
    }
    return c;
}

double asset_to_default_correlation(double p_i, double p_j, double rho_asset) {
    if (!(p_i > 0.0 && p_i < 1.0) || !(p_j > 0.0 && p_j < 1.0)) {
        throw DegenerateMarginalError(
            "asset_to_default_correlation needs marginals strictly inside (0,1)");
    }
    if (!(rho_asset >= 0.0 && rho_asset <= 1.0)) {
        std::ostringstream msg;
        msg << "asset correlation " << rho_asset << " outside [0, 1]";
        throw ValidationError(msg.str());
    }
    const double q_i = 1.0 - p_i;
    const double q_j = 1.0 - p_j;
    const double denom = std::sqrt(p_i * q_i * p_j * q_j);
    if (rho_asset == 0.0) return 0.0;
    if (rho_asset == 1.0) return (std::min(p_i, p_j) - p_i * p_j) / denom;
    // P(both default) - p_i p_j is exactly the correlation correction term
    // of the bivariate CDF at the calibrated thresholds.
    const double h = norm_quantile(p_i);
    const double k = norm_quantile(p_j);
    return binorm_corr_integral(h, k, rho_asset) / denom;
}

LadderProcess degenerate_max_correlation(const Portfolio& portfolio) {
    return build_ladder(portfolio);
}

namespace {

// Per-draw scenario generation, one of three regimes.
struct DrawEngine {
    const Portfolio& portfolio;
    const LatentFamily& family;
    enum class Mode { Degenerate, SingleFactor, FullMatrix } mode;
    double factor_loading = 0.0;      // sqrt(rho), SingleFactor only
    double idiosyncratic = 0.0;       // sqrt(1 - rho)
    Eigen::VectorXd thresholds;       // latent-space, per mode
    Eigen::MatrixXd chol;             // lower factor, FullMatrix only

    static DrawEngine make(const Portfolio& portfolio, const AssetCorrelationSpec& corr,
                           const LatentFamily* family_ptr) {
        const LatentFamily& family = family_ptr ? *family_ptr : gaussian_family();
        DrawEngine eng{portfolio, family, Mode::Degenerate, 0.0, 0.0, {}, {}};
        if (corr.is_flat() && corr.flat_rho() == 1.0) {
            eng.mode = Mode::Degenerate;
            const auto n = static_cast<Eigen::Index>(portfolio.size());
            eng.thresholds.resize(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                eng.thresholds[i] = family.quantile(portfolio.name(i).default_prob);
            }
            return eng;
        }
        if (&family != &gaussian_family()) {
            throw ValidationError(
                "non-Gaussian latent families are only supported at flat rho = 1, "
                "where every continuous family gives the same law");
        }
        eng.thresholds = calibrate_thresholds(portfolio);
        if (corr.is_flat()) {
            eng.mode = Mode::SingleFactor;
            eng.factor_loading = std::sqrt(corr.flat_rho());
            eng.idiosyncratic = std::sqrt(1.0 - corr.flat_rho());
            return eng;
        }
        eng.mode = Mode::FullMatrix;
        if (static_cast<std::size_t>(corr.matrix().rows()) != portfolio.size()) {
            throw ValidationError("asset correlation matrix does not match portfolio size");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(corr.matrix());
        if (llt.info() != Eigen::Success) {
            // Semidefinite input: lift the diagonal and retry once.
            Eigen::MatrixXd lifted = corr.matrix();
            lifted.diagonal().array() += 1e-12;
            llt.compute(lifted);
            if (llt.info() != Eigen::Success) {
                throw NumericalError(
                    "Cholesky factorization failed: asset correlation matrix is not "
                    "positive semi-definite within tolerance");
            }
        }
        eng.chol = llt.matrixL();
        return eng;
    }

    // Scenario mask for the next draw from rng. Uniform consumption per draw
    // is fixed by mode: 1 (degenerate), 1+N (single factor), N (full matrix).
    std::uint64_t draw(Xoshiro256pp& rng) const {
        const std::size_t n = portfolio.size();
        std::uint64_t mask = 0;
        switch (mode) {
            case Mode::Degenerate: {
                const double z = family.quantile(rng.uniform01());
                for (std::size_t i = 0; i < n; ++i) {
                    if (z < thresholds[static_cast<Eigen::Index>(i)]) {
                        mask |= std::uint64_t{1} << i;
                    }
                }
                break;
            }
            case Mode::SingleFactor: {
                const double z = norm_quantile(rng.uniform01());
                for (std::size_t i = 0; i < n; ++i) {
                    const double eps = norm_quantile(rng.uniform01());
                    const double x = factor_loading * z + idiosyncratic * eps;
                    if (x < thresholds[static_cast<Eigen::Index>(i)]) {
                        mask |= std::uint64_t{1} << i;
                    }
                }
                break;
            }
            case Mode::FullMatrix: {
                const auto dim = static_cast<Eigen::Index>(n);
                Eigen::VectorXd xi(dim);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    xi[i] = norm_quantile(rng.uniform01());
                }
                // Lower-triangular apply; only the prefix of xi matters per row.
                for (Eigen::Index i = 0; i < dim; ++i) {
                    const double x = chol.row(i).head(i + 1).dot(xi.head(i + 1));
                    if (x < thresholds[i]) mask |= std::uint64_t{1} << i;
                }
                break;
            }
        }
        return mask;
    }
};

} // namespace

std::vector<DefaultScenario> simulate_copula(const Portfolio& portfolio,
                                             const AssetCorrelationSpec& corr,
                                             std::uint64_t draws, std::uint64_t seed,
                                             const SimOptions& opts) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    if (portfolio.size() > 64) {
        throw ValidationError("simulation supports at most 64 names");
    }
    const DrawEngine engine = DrawEngine::make(portfolio, corr, opts.family);
    std::vector<DefaultScenario> out(draws);
    const std::size_t n = portfolio.size();
    for_each_block(draws, kDrawBlockSize, opts.threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       Xoshiro256pp rng = block_stream(seed, block);
                       for (std::uint64_t d = lo; d < hi; ++d) {
                           out[d] = scenario_from_mask(engine.draw(rng), n);
                       }
                   });
    return out;
}

std::map<std::uint64_t, std::uint64_t> simulate_copula_counts(
    const Portfolio& portfolio, const AssetCorrelationSpec& corr, std::uint64_t draws,
    std::uint64_t seed, const SimOptions& opts) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    if (portfolio.size() > 64) {
        throw ValidationError("simulation supports at most 64 names");
    }
    const DrawEngine engine = DrawEngine::make(portfolio, corr, opts.family);
    const std::uint64_t n_blocks = (draws + kDrawBlockSize - 1) / kDrawBlockSize;
    std::vector<std::map<std::uint64_t, std::uint64_t>> per_block(n_blocks);
    for_each_block(draws, kDrawBlockSize, opts.threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       Xoshiro256pp rng = block_stream(seed, block);
                       auto& counts = per_block[block];
                       for (std::uint64_t d = lo; d < hi; ++d) {
                           counts[engine.draw(rng)]++;
                       }
                   });
    std::map<std::uint64_t, std::uint64_t> total;
    for (const auto& counts : per_block) {
        for (const auto& [mask, count] : counts) total[mask] += count;
    }
    return total;
}

void simulate_copula_payoffs(
    const Portfolio& portfolio, const AssetCorrelationSpec& corr, std::uint64_t draws,
    std::uint64_t seed, int threads,
    const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    if (draws < 1) throw ValidationError("draws must be >= 1");
    if (portfolio.size() > 64) {
        throw ValidationError("simulation supports at most 64 names");
    }
    const DrawEngine engine = DrawEngine::make(portfolio, corr, nullptr);
    for_each_block(draws, kDrawBlockSize, threads,
                   [&](std::uint64_t block, std::uint64_t lo, std::uint64_t hi) {
                       Xoshiro256pp rng = block_stream(seed, block);
                       for (std::uint64_t d = lo; d < hi; ++d) {
                           fn(block, engine.draw(rng));
                       }
                   });
}

JointTable copula_scenario_table(const Portfolio& portfolio, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        std::ostringstream msg;
        msg << "flat asset correlation " << rho << " outside [0, 1]";
        throw ValidationError(msg.str());
    }
    const std::size_t n = portfolio.size();
    if (n > kExhaustiveCutoff) {
        throw ValidationError("scenario table: exhaustive cutoff exceeded");
    }
    if (rho == 0.0) return independence_table(portfolio);
    if (rho == 1.0) return ladder_joint_table(build_ladder(portfolio));

    const Eigen::VectorXd c = calibrate_thresholds(portfolio);
    const double sqrt_rho = std::sqrt(rho);
    const double sqrt_1m = std::sqrt(1.0 - rho);

    // Conditional independence given the factor: integrate the product of
    // conditional default/survival probabilities against the factor density.
    // Panel width tracks the conditional transition scale sqrt(1-rho).
    const double z_max = 10.0;
    const double width = std::min(0.5, sqrt_1m);
    const int panels = std::min(4000, static_cast<int>(std::ceil(2.0 * z_max / width)));
    const GaussLegendreRule& rule = gauss_legendre(20);

    JointTable table;
    table.n_names = n;
    table.probs.assign(std::size_t{1} << n, 0.0);
    std::vector<double> cond(std::size_t{1} << n);
    for (int panel = 0; panel < panels; ++panel) {
        const double lo = -z_max + 2.0 * z_max * panel / panels;
        const double hi = -z_max + 2.0 * z_max * (panel + 1) / panels;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t node = 0; node < rule.nodes.size(); ++node) {
            const double z = mid + half * rule.nodes[node];
            const double w = rule.weights[node] * half * norm_pdf(z);
            // Unfold conditional scenario probabilities with a doubling pass.
            cond[0] = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double pi_z =
                    norm_cdf((c[static_cast<Eigen::Index>(i)] - sqrt_rho * z) / sqrt_1m);
                const std::uint64_t bit = std::uint64_t{1} << i;
                for (std::uint64_t m = bit; m-- > 0;) {
                    const double base = cond[m];
                    cond[m | bit] = base * pi_z;
                    cond[m] = base * (1.0 - pi_z);
                }
            }
            for (std::size_t m = 0; m < table.probs.size(); ++m) {
                table.probs[m] += w * cond[m];
            }
        }
    }
    return table;
}

} // namespace maxcorr
