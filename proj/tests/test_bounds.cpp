#include <doctest.h>

#include <cmath>
#include <random>

#include "maxcorr/bounds.hpp"
#include "maxcorr/errors.hpp"
#include "testutil.hpp"

using namespace maxcorr;

TEST_CASE("joint_default_probs at independence") {
    const auto jp = joint_default_probs(0.5, 0.5, 0.0);
    CHECK(jp.p00 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(jp.p01 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(jp.p10 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(jp.p11 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(jp.consistent());
}

TEST_CASE("saturating correlation annihilates P(1,0)") {
    const double p_i = 0.006, p_j = 0.04;
    const double rho = std::sqrt((p_i * (1 - p_j)) / ((1 - p_i) * p_j));
    const auto jp = joint_default_probs(p_i, p_j, rho);
    CHECK(std::abs(jp.p10) <= 1e-15);
    CHECK(jp.consistent());
}

TEST_CASE("correlation above the bound produces a negative probability") {
    const auto jp = joint_default_probs(0.01, 0.04, 0.6);
    CHECK(jp.p10 < 0.0);
    CHECK(!jp.consistent());
    CHECK_THROWS_AS(jp.require_consistent(), InconsistentCorrelationError);
    try {
        jp.require_consistent();
    } catch (const InconsistentCorrelationError& e) {
        CHECK(e.offending_value == jp.p10);
    }
}

TEST_CASE("joint probabilities reproduce the marginals") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> prob(0.001, 0.999);
    std::uniform_real_distribution<double> corr(-1.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double p_i = prob(gen), p_j = prob(gen), rho = corr(gen);
        const auto jp = joint_default_probs(p_i, p_j, rho);
        CHECK(std::abs(jp.p10 + jp.p11 - p_i) <= 1e-12);
        CHECK(std::abs(jp.p01 + jp.p11 - p_j) <= 1e-12);
        CHECK(std::abs(jp.p00 + jp.p01 + jp.p10 + jp.p11 - 1.0) <= 1e-12);
    }
}

TEST_CASE("degenerate marginals are refused") {
    CHECK_THROWS_AS(joint_default_probs(0.0, 0.5, 0.1), DegenerateMarginalError);
    CHECK_THROWS_AS(joint_default_probs(0.5, 1.0, 0.1), DegenerateMarginalError);
    CHECK_THROWS_AS(correlation_upper_bound(1.0, 0.5), DegenerateMarginalError);
    CHECK_THROWS_AS(joint_default_probs(0.5, 0.5, 1.5), ValidationError);
}

TEST_CASE("correlation_upper_bound values") {
    CHECK(correlation_upper_bound(0.3, 0.3) == 1.0);
    CHECK(correlation_upper_bound(0.01, 0.04) ==
          doctest::Approx(std::sqrt(0.0096 / 0.0396)).epsilon(1e-15));
    CHECK(correlation_upper_bound(0.01, 0.04) == doctest::Approx(0.492366).epsilon(1e-6));
    CHECK(correlation_upper_bound(0.006, 0.04) == doctest::Approx(0.380617).epsilon(1e-6));
}

TEST_CASE("correlation_upper_bound is symmetric and 1 iff equal marginals") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> prob(0.001, 0.999);
    for (int i = 0; i < 2000; ++i) {
        const double a = prob(gen), b = prob(gen);
        CHECK(correlation_upper_bound(a, b) == correlation_upper_bound(b, a));
        if (a != b) CHECK(correlation_upper_bound(a, b) < 1.0);
        CHECK(correlation_upper_bound(a, a) == 1.0);
    }
}

TEST_CASE("non-negativity of all four probabilities is equivalent to the bounds") {
    // Scan a grid of marginals and correlations; the admissible window is
    // exactly [lower bound, upper bound].
    for (int a = 1; a <= 19; ++a) {
        for (int b = 1; b <= 19; ++b) {
            const double p_i = a / 20.0, p_j = b / 20.0;
            const double ub = correlation_upper_bound(p_i, p_j);
            const double lb = detail::correlation_lower_bound(p_i, p_j);
            for (int r = -20; r <= 20; ++r) {
                const double rho = r / 20.0;
                const auto jp = joint_default_probs(p_i, p_j, rho);
                const bool nonneg = jp.min_prob() >= -1e-12;
                const bool inside = rho <= ub + 1e-12 && rho >= lb - 1e-12;
                CHECK_MESSAGE(nonneg == inside, "p_i=", p_i, " p_j=", p_j, " rho=", rho);
            }
        }
    }
}

TEST_CASE("saturated_matrix of the five-name pool") {
    const Portfolio p = testutil::five_name_fixture();
    const DefaultCorrelationMatrix m = saturated_matrix(p);
    CHECK(m(0, 4) == doctest::Approx(0.380617).epsilon(1e-6));
    CHECK(m(1, 2) == 1.0); // names 2 and 3 share p = 1%
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(m(i, i) == 1.0);
        for (std::size_t j = i + 1; j < 5; ++j) {
            CHECK(m(i, j) == m(j, i));
            CHECK(m(i, j) ==
                  doctest::Approx(correlation_upper_bound(p.name(i).default_prob,
                                                          p.name(j).default_prob))
                      .epsilon(1e-15));
        }
    }
}

TEST_CASE("two equal names saturate at exactly 1") {
    std::vector<Obligor> names;
    names.emplace_back("a", 0.5, 0.0, 0.5);
    names.emplace_back("b", 0.5, 0.0, 0.5);
    const DefaultCorrelationMatrix m = saturated_matrix(Portfolio(std::move(names)));
    CHECK(m(0, 1) == 1.0);
}

TEST_CASE("saturated entries plug back to P(1,0) = 0") {
    std::mt19937_64 gen(17);
    const Portfolio p = testutil::random_portfolio(gen, 7);
    const DefaultCorrelationMatrix m = saturated_matrix(p);
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = i + 1; j < 7; ++j) {
            const auto jp = joint_default_probs(p.name(i).default_prob,
                                                p.name(j).default_prob, m(i, j));
            CHECK(std::abs(jp.p10) <= 1e-12);
        }
    }
}

TEST_CASE("validate_matrix separates bound violations from eigenvalue positivity") {
    const Portfolio p = testutil::five_name_fixture();

    SUBCASE("saturated matrix has no bound violations and is realizable") {
        const auto report = validate_matrix(p, saturated_matrix(p));
        CHECK(report.bounds_ok());
        // The ladder process realizes these correlations, so the matrix is a
        // genuine indicator correlation matrix and must be PSD.
        CHECK(report.positive_semi_definite);
    }

    SUBCASE("the two checks are independent of each other") {
        // Positive definite yet bound-violating: flat 0.9 across unequal
        // marginals (bounds are well below 0.9 for this pool).
        Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(5, 5, 0.9);
        flat.diagonal().setOnes();
        const auto r1 = validate_matrix(p, DefaultCorrelationMatrix(flat));
        CHECK(r1.positive_semi_definite);
        CHECK(!r1.bounds_ok());

        // Bound-satisfying yet not PSD: equal marginals make every pairwise
        // window [-1, 1], but mutual correlation -1 among three names is
        // impossible.
        std::vector<Obligor> eq;
        eq.emplace_back("a", 0.5, 0.0, 0.3);
        eq.emplace_back("b", 0.5, 0.0, 0.3);
        eq.emplace_back("c", 0.5, 0.0, 0.3);
        const Portfolio equal_pool(std::move(eq));
        Eigen::MatrixXd neg = Eigen::MatrixXd::Constant(3, 3, -1.0);
        neg.diagonal().setOnes();
        const auto r2 = validate_matrix(equal_pool, DefaultCorrelationMatrix(neg));
        CHECK(r2.bounds_ok());
        CHECK(!r2.positive_semi_definite);
    }

    SUBCASE("identity matrix is valid on both checks") {
        const DefaultCorrelationMatrix eye(Eigen::MatrixXd::Identity(5, 5));
        const auto report = validate_matrix(p, eye);
        CHECK(report.bounds_ok());
        CHECK(report.positive_semi_definite);
        CHECK(report.valid());
    }

    SUBCASE("one entry pushed past its bound is flagged exactly once") {
        Eigen::MatrixXd m = saturated_matrix(p).entries();
        m(0, 4) += 0.01;
        m(4, 0) = m(0, 4);
        const auto report = validate_matrix(p, DefaultCorrelationMatrix(m));
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].i == 0);
        CHECK(report.violations[0].j == 4);
        CHECK(report.violations[0].value == m(0, 4));
        CHECK(report.violations[0].bound ==
              doctest::Approx(correlation_upper_bound(0.006, 0.04)).epsilon(1e-15));
    }

    SUBCASE("dimension mismatch is a validation error") {
        const DefaultCorrelationMatrix eye(Eigen::MatrixXd::Identity(4, 4));
        CHECK_THROWS_AS(validate_matrix(p, eye), ValidationError);
    }
}

TEST_CASE("correlation matrix construction validates shape") {
    Eigen::MatrixXd bad_diag = Eigen::MatrixXd::Identity(3, 3);
    bad_diag(1, 1) = 0.99;
    CHECK_THROWS_AS(DefaultCorrelationMatrix{bad_diag}, ValidationError);

    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(DefaultCorrelationMatrix{asym}, ValidationError);

    Eigen::MatrixXd oob = Eigen::MatrixXd::Identity(2, 2);
    oob(0, 1) = oob(1, 0) = 1.5;
    CHECK_THROWS_AS(DefaultCorrelationMatrix{oob}, ValidationError);
}
