#include <doctest.h>

#include <cmath>
#include <random>

#include "maxcorr/errors.hpp"
#include "maxcorr/pricing.hpp"
#include "testutil.hpp"

using namespace maxcorr;

TEST_CASE("single-name CDS fair premium is lgd times p") {
    CHECK(price_single_name_cds(Obligor("a", 0.006, 0.0, 1.0)).value ==
          doctest::Approx(0.006).epsilon(1e-15));
    CHECK(price_single_name_cds(Obligor("b", 0.0, 0.3, 1.0)).value == 0.0);
    CHECK(price_single_name_cds(Obligor("c", 0.04, 0.4, 1.0)).value ==
          doctest::Approx(0.024).epsilon(1e-15));
}

TEST_CASE("supersenior at A = 0.5 under the ladder law prices to 0.0042") {
    const Portfolio p = testutil::five_name_fixture();
    const LadderProcess ladder = build_ladder(p);
    const Valuation v =
        price_tranche_exhaustive(p, TrancheSpec::supersenior(0.5), ladder);
    // Only the two deepest scenarios reach past the attachment:
    // 0.004 * (0.8 - 0.5) + 0.006 * (1.0 - 0.5).
    CHECK(v.value == doctest::Approx(0.0042).epsilon(1e-12));
    CHECK(v.std_error == 0.0);
    CHECK(v.method == Valuation::Method::Exhaustive);

    // Same number through the full 2^N table.
    const Valuation v2 = price_tranche_exhaustive(p, TrancheSpec::supersenior(0.5),
                                                  ladder_joint_table(ladder));
    CHECK(v2.value == doctest::Approx(v.value).epsilon(1e-14));
}

TEST_CASE("supersenior attached at total capacity is never hit") {
    const Portfolio p = testutil::five_name_fixture();
    const LadderProcess ladder = build_ladder(p);
    CHECK(price_tranche_exhaustive(p, TrancheSpec::supersenior(1.0), ladder).value == 0.0);
    CHECK(price_tranche_exhaustive(p, TrancheSpec::supersenior(1.5), ladder).value == 0.0);
}

TEST_CASE("equity at total capacity collects the whole expected loss") {
    const Portfolio p = testutil::five_name_fixture();
    const LadderProcess ladder = build_ladder(p);
    CHECK(price_tranche_exhaustive(p, TrancheSpec::equity(1.0), ladder).value ==
          doctest::Approx(p.expected_loss()).epsilon(1e-13));
    // Under independence as well: the expectation is law-blind.
    CHECK(price_tranche_exhaustive(p, TrancheSpec::equity(1.0), independence_table(p)).value ==
          doctest::Approx(p.expected_loss()).epsilon(1e-13));
}

TEST_CASE("Monte Carlo pricer agrees with the exhaustive ladder price") {
    const Portfolio p = testutil::five_name_fixture();
    const TrancheSpec tranche = TrancheSpec::supersenior(0.5);
    const double exact =
        price_tranche_exhaustive(p, tranche, build_ladder(p)).value;
    const Valuation mc =
        price_tranche_mc(p, tranche, AssetCorrelationSpec::flat(1.0), 1'000'000, 8);
    CHECK(mc.method == Valuation::Method::MonteCarlo);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value - exact) <= 4.0 * mc.std_error);
}

TEST_CASE("Monte Carlo at zero attachment recovers the expected loss") {
    const Portfolio p = testutil::five_name_fixture();
    const Valuation mc = price_tranche_mc(p, TrancheSpec::supersenior(0.0),
                                          AssetCorrelationSpec::flat(0.0), 400'000, 9);
    CHECK(std::abs(mc.value - p.expected_loss()) <= 4.0 * mc.std_error);
}

TEST_CASE("Monte Carlo pricing is bit-deterministic given the seed") {
    const Portfolio p = testutil::five_name_fixture();
    const TrancheSpec tranche = TrancheSpec::supersenior(0.4);
    const AssetCorrelationSpec corr = AssetCorrelationSpec::flat(0.3);
    const Valuation a = price_tranche_mc(p, tranche, corr, 200'000, 77, 1);
    const Valuation b = price_tranche_mc(p, tranche, corr, 200'000, 77, 2);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("exhaustive and MC pricers agree on random portfolios") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 3; ++trial) {
        const Portfolio p = testutil::random_portfolio(gen, 6 + 2 * trial); // up to 10 names
        const double attach = 0.5 * p.total_loss_capacity();
        const TrancheSpec tranche = TrancheSpec::supersenior(attach);
        const double rho = 0.3 + 0.2 * trial;
        const double exact =
            price_tranche_exhaustive(p, tranche, copula_scenario_table(p, rho)).value;
        const Valuation mc = price_tranche_mc(
            p, tranche, AssetCorrelationSpec::flat(rho), 400'000, 1000 + trial);
        CHECK_MESSAGE(std::abs(mc.value - exact) <= 4.0 * mc.std_error,
                      "exact=", exact, " mc=", mc.value, " se=", mc.std_error);
    }
}

TEST_CASE("supersenior value never increases with the attachment") {
    std::mt19937_64 gen(43);
    const Portfolio p = testutil::random_portfolio(gen, 8);
    const JointTable law = copula_scenario_table(p, 0.5);
    double prev = price_tranche_exhaustive(p, TrancheSpec::supersenior(0.0), law).value;
    for (int k = 1; k <= 20; ++k) {
        const double attach = p.total_loss_capacity() * k / 20.0;
        const double cur =
            price_tranche_exhaustive(p, TrancheSpec::supersenior(attach), law).value;
        CHECK(cur <= prev + 1e-14);
        prev = cur;
    }
}

TEST_CASE("supersenior value is non-decreasing in flat correlation above expected loss") {
    const Portfolio p = testutil::five_name_fixture();
    const double attach = 0.3; // well above expected loss 0.0156
    double prev = -1.0;
    for (int k = 0; k <= 10; ++k) {
        const double rho = k / 10.0;
        const double value =
            price_tranche_exhaustive(p, TrancheSpec::supersenior(attach),
                                     copula_scenario_table(p, rho))
                .value;
        CHECK_MESSAGE(value >= prev - 1e-10, "rho=", rho);
        CHECK(value >= 0.0);
        prev = value;
    }
}

TEST_CASE("parity: equity plus supersenior is the expected total loss") {
    const Portfolio p = testutil::five_name_fixture();
    const LadderProcess ladder = build_ladder(p);

    SUBCASE("at the worked attachment point") {
        const ParityReport report = parity_check(p, 0.5, ladder);
        CHECK(report.supersenior_value == doctest::Approx(0.0042).epsilon(1e-12));
        CHECK(report.equity_value == doctest::Approx(0.0114).epsilon(1e-11));
        CHECK(report.expected_total_loss == doctest::Approx(0.0156).epsilon(1e-12));
        CHECK(std::abs(report.gap) <= 1e-12);
    }

    SUBCASE("across a grid of attachments under two laws") {
        const JointTable independent = independence_table(p);
        for (int k = 0; k <= 20; ++k) {
            const double attach = p.total_loss_capacity() * k / 20.0;
            CHECK(std::abs(parity_check(p, attach, ladder).gap) <= 1e-12);
            CHECK(std::abs(parity_check(p, attach, independent).gap) <= 1e-12);
        }
    }

    SUBCASE("the expected-loss side is correlation-blind") {
        const double el_ladder = parity_check(p, 0.5, ladder).expected_total_loss;
        const double el_indep =
            parity_check(p, 0.5, independence_table(p)).expected_total_loss;
        CHECK(el_ladder == el_indep);
    }
}

TEST_CASE("valuations are non-negative") {
    std::mt19937_64 gen(47);
    for (int trial = 0; trial < 5; ++trial) {
        const Portfolio p = testutil::random_portfolio(gen, 7);
        std::uniform_real_distribution<double> attach(0.0, p.total_loss_capacity());
        const double a = attach(gen);
        CHECK(price_tranche_exhaustive(p, TrancheSpec::supersenior(a),
                                       copula_scenario_table(p, 0.35))
                  .value >= 0.0);
        CHECK(price_tranche_exhaustive(p, TrancheSpec::equity(a),
                                       copula_scenario_table(p, 0.35))
                  .value >= 0.0);
    }
}

TEST_CASE("malformed probability tables are rejected") {
    const Portfolio p = testutil::five_name_fixture();
    JointTable bad = independence_table(p);
    bad.probs[3] += 0.5;
    CHECK_THROWS_AS(
        price_tranche_exhaustive(p, TrancheSpec::supersenior(0.5), bad),
        ValidationError);
    CHECK_THROWS_AS(TrancheSpec::supersenior(-0.1), ValidationError);
}
