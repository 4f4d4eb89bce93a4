#include <doctest.h>

#include <cmath>
#include <random>

#include "maxcorr/errors.hpp"
#include "maxcorr/normal.hpp"
#include "maxcorr/quadrature.hpp"
#include "testutil.hpp"

using namespace maxcorr;

TEST_CASE("norm_cdf basics") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    CHECK(norm_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
    CHECK(norm_cdf(8.0) + norm_cdf(-8.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("norm_quantile matches the bisection oracle") {
    for (double p : {1e-10, 1e-6, 0.001, 0.006, 0.01, 0.012, 0.04, 0.1, 0.25, 0.5,
                     0.75, 0.9, 0.99, 0.999999}) {
        const double got = norm_quantile(p);
        const double want = testutil::norm_quantile_oracle(p);
        CHECK_MESSAGE(std::abs(got - want) <= 2e-12 * std::max(1.0, std::abs(want)),
                      "p=", p, " got=", got, " want=", want);
    }
    // Known anchors.
    CHECK(norm_quantile(0.5) == 0.0);
    CHECK(norm_quantile(0.01) == doctest::Approx(-2.3263478740408408).epsilon(1e-13));
    CHECK(norm_quantile(0.04) == doctest::Approx(-1.7506860712521692).epsilon(1e-13));
}

TEST_CASE("norm_quantile round trip within 1e-12") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double p = unif(gen);
        if (p <= 0.0 || p >= 1.0) continue;
        CHECK(std::abs(norm_cdf(norm_quantile(p)) - p) <= 1e-12);
    }
    // Tails too.
    for (double p : {1e-14, 1e-12, 1e-9, 1e-5, 1.0 - 1e-9, 1.0 - 1e-12}) {
        CHECK(std::abs(norm_cdf(norm_quantile(p)) - p) <= 1e-12);
    }
    CHECK(std::isinf(norm_quantile(0.0)));
    CHECK(std::isinf(norm_quantile(1.0)));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    const auto& rule = gauss_legendre(15);
    // Degree 2n-1 = 29 is exact; check x^8 over [0, 2].
    const double got = gl_integrate(rule, 0.0, 2.0, [](double x) {
        double v = 1.0;
        for (int i = 0; i < 8; ++i) v *= x;
        return v;
    });
    CHECK(got == doctest::Approx(512.0 / 9.0).epsilon(1e-13));
    // Weights sum to 2.
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("binorm_cdf closed forms and symmetry") {
    CHECK(binorm_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    // Comonotone and antithetic limits.
    CHECK(binorm_cdf(-1.0, 0.5, 1.0) == doctest::Approx(norm_cdf(-1.0)).epsilon(1e-14));
    CHECK(binorm_cdf(-1.0, 0.5, -1.0) ==
          doctest::Approx(std::max(norm_cdf(-1.0) + norm_cdf(0.5) - 1.0, 0.0)).epsilon(1e-12));
    // Known value: Phi2(0,0,rho) = 1/4 + asin(rho)/(2 pi).
    for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, -0.5, -0.9}) {
        const double want = 0.25 + std::asin(rho) / (2.0 * M_PI);
        CHECK(binorm_cdf(0.0, 0.0, rho) == doctest::Approx(want).epsilon(1e-10));
    }
    // Symmetry in the arguments.
    CHECK(binorm_cdf(-1.2, 0.7, 0.45) == doctest::Approx(binorm_cdf(0.7, -1.2, 0.45)).epsilon(1e-12));
}

TEST_CASE("binorm_cdf agrees with the product rule at rho=0 and marginals at extremes") {
    for (double h : {-2.5, -1.0, 0.3, 1.7}) {
        for (double k : {-2.0, 0.0, 1.1}) {
            CHECK(binorm_cdf(h, k, 0.0) ==
                  doctest::Approx(norm_cdf(h) * norm_cdf(k)).epsilon(1e-14));
            // Monotone in rho.
            double prev = binorm_cdf(h, k, -0.999);
            for (double rho : {-0.5, 0.0, 0.5, 0.999}) {
                const double cur = binorm_cdf(h, k, rho);
                CHECK(cur >= prev - 1e-12);
                prev = cur;
            }
        }
    }
}
