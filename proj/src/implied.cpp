#include "maxcorr/implied.hpp"

#include <cmath>
#include <sstream>

#include "maxcorr/errors.hpp"

namespace maxcorr {

const char* to_string(CalibrationStatus status) {
    switch (status) {
        case CalibrationStatus::Solved: return "solved";
        case CalibrationStatus::Breakdown: return "breakdown";
        case CalibrationStatus::BelowRange: return "below-range";
    }
    return "unknown";
}

namespace {

struct InteriorPricer {
    const Portfolio& portfolio;
    const TrancheSpec& tranche;
    const ImpliedConfig& config;
    bool use_mc;

    // Model price at rho; std error reported for the MC path.
    Valuation operator()(double rho) const {
        if (use_mc) {
            return price_tranche_mc(portfolio, tranche,
                                    AssetCorrelationSpec::flat(rho), config.mc_draws,
                                    config.seed, config.threads);
        }
        return price_tranche_exhaustive(portfolio, tranche,
                                        copula_scenario_table(portfolio, rho));
    }
};

} // namespace

CalibrationResult implied_flat_correlation(const Portfolio& portfolio,
                                           const TrancheSpec& tranche,
                                           double market_price,
                                           const ImpliedConfig& config) {
    if (tranche.kind != TrancheSpec::Kind::Supersenior) {
        throw ValidationError("implied correlation is defined on supersenior tranches");
    }
    if (!(market_price >= 0.0)) {
        throw ValidationError("market price must be >= 0");
    }

    const bool use_mc = config.force_mc || portfolio.size() > kExhaustiveCutoff;
    const InteriorPricer price{portfolio, tranche, config, use_mc};

    CalibrationResult result;
    result.market_price = market_price;
    result.interior_method =
        use_mc ? Valuation::Method::MonteCarlo : Valuation::Method::Exhaustive;

    // Endpoints. rho = 1 is the exact ladder value: breakdown detection must
    // not be blurred by sampling noise.
    result.price_at_one =
        price_tranche_exhaustive(portfolio, tranche, build_ladder(portfolio)).value;
    const Valuation at_zero = price(0.0);
    result.price_at_zero = at_zero.value;

    const double floor_tol = use_mc ? 2.0 * at_zero.std_error + config.price_tol
                                    : config.price_tol;
    if (market_price > result.price_at_one + config.price_tol) {
        result.status = CalibrationStatus::Breakdown;
        return result;
    }
    if (market_price < result.price_at_zero - floor_tol) {
        result.status = CalibrationStatus::BelowRange;
        return result;
    }

    // Bisection, using that the supersenior value is non-decreasing in rho.
    double lo = 0.0, hi = 1.0;
    double f_lo = result.price_at_zero - market_price;
    double f_hi = result.price_at_one - market_price;
    result.status = CalibrationStatus::Solved;
    if (f_lo >= 0.0) {
        // Quote at or marginally above the independent price.
        result.rho = 0.0;
        return result;
    }
    if (f_hi <= 0.0) {
        result.rho = 1.0;
        return result;
    }

    while (hi - lo > config.rho_tol) {
        const double mid = 0.5 * (lo + hi);
        const Valuation v = price(mid);
        ++result.iterations;
        const double f_mid = v.value - market_price;
        const double noise = use_mc ? 2.0 * v.std_error : 0.0;
        if (std::abs(f_mid) <= config.price_tol + noise) {
            result.rho = mid;
            return result;
        }
        // A monotone model price must stay inside the bracket values; a
        // breach beyond sampling noise means the bracket is unreliable.
        // First offense gets a widened tolerance before giving up.
        double slack = use_mc ? 4.0 * v.std_error : config.price_tol;
        if (f_mid < f_lo - slack || f_mid > f_hi + slack) {
            slack *= 4.0;
            if (f_mid < f_lo - slack || f_mid > f_hi + slack) {
                std::ostringstream msg;
                msg << "non-monotone bracket at rho = " << mid << " (model " << v.value
                    << ", bracket prices [" << f_lo + market_price << ", "
                    << f_hi + market_price << "], market " << market_price << ")";
                throw NumericalError(msg.str());
            }
        }
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    result.rho = 0.5 * (lo + hi);
    return result;
}

BreakdownReport breakdown_report(const Portfolio& portfolio, const TrancheSpec& tranche,
                                 double market_price, const ImpliedConfig& config) {
    BreakdownReport report;
    report.calibration = implied_flat_correlation(portfolio, tranche, market_price, config);
    const CalibrationResult& cal = report.calibration;
    report.excess_premium = std::max(market_price - cal.price_at_one, 0.0);

    std::ostringstream out;
    out << "supersenior tranche at attachment " << tranche.attachment << ": market price "
        << market_price << ", model price range [" << cal.price_at_zero << " at rho=0, "
        << cal.price_at_one << " at rho=1]. ";
    switch (cal.status) {
        case CalibrationStatus::Solved:
            out << "Quote is consistent: implied flat correlation " << cal.rho << ".";
            break;
        case CalibrationStatus::Breakdown:
            out << "Correlation breakdown: the quote exceeds the maximal-correlation "
                   "price by "
                << report.excess_premium
                << ". No consistent default process reproduces it; the excess premium "
                   "can be locked in with the arbitrage portfolio (see the arb command).";
            break;
        case CalibrationStatus::BelowRange:
            out << "Quote lies below the zero-correlation price; no flat correlation "
                   "in [0,1] reproduces it.";
            break;
    }
    report.diagnosis = out.str();
    return report;
}

} // namespace maxcorr
