#include "predtest/distributions.hpp"
#include "predtest/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace predtest;

TEST_CASE("normal CDF basics") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.2816) - 0.90) < 1e-4);
    for (double x : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-15);
        CHECK(std::abs(normal_sf(x) - normal_cdf(-x)) < 1e-15);
    }
}

TEST_CASE("normal CDF agrees with numerical integration of the density") {
    for (double x : {-3.0, -1.5, -0.2, 0.7, 1.2816, 1.6449, 2.5, 4.0}) {
        CAPTURE(x);
        CHECK(std::abs(normal_cdf(x) - oracle::normal_cdf_by_integration(x)) < 1e-12);
    }
    // Deep tail: relative accuracy of the survival function.
    CHECK(normal_sf(10.0) == doctest::Approx(7.61985302416047e-24).epsilon(1e-10));
}

TEST_CASE("df = 2 closed form") {
    for (double x : {0.1, 1.0, 4.60517, 9.0}) {
        CHECK(std::abs(chisq_cdf(x, {2, 0.0}) - (1.0 - std::exp(-x / 2.0))) < 1e-14);
    }
    CHECK(std::abs(chisq_cdf(4.60517, {2, 0.0}) - 0.90) < 1e-6);
}

TEST_CASE("central CDF agrees with numerical integration") {
    for (int df : {1, 2, 3, 5, 10, 20}) {
        for (double x : {0.05, 0.5, 2.0, 7.5, 15.0, 30.0}) {
            CAPTURE(df);
            CAPTURE(x);
            CHECK(std::abs(chisq_cdf(x, {static_cast<std::size_t>(df), 0.0}) -
                           oracle::chisq_cdf_by_integration(x, df)) < 1e-10);
        }
    }
}

TEST_CASE("zero noncentrality reproduces the central CDF") {
    for (std::size_t df : {1u, 3u, 5u}) {
        for (double x = 0.0; x < 25.0; x += 0.37) {
            const double central = regularized_gamma_p(df / 2.0, x / 2.0);
            CHECK(std::abs(chisq_cdf(x, {df, 0.0}) - central) < 1e-10);
            CHECK(std::abs(chisq_cdf(x, {df, 1e-300}) - central) < 1e-10);
        }
    }
}

TEST_CASE("incomplete gamma pieces are complementary") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 50.0}) {
        for (double x : {0.01, 0.5, 3.0, 12.0, 60.0}) {
            CHECK(std::abs(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) - 1.0) < 1e-13);
        }
    }
    CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), Error);
}

TEST_CASE("noncentral CDF agrees with a series written independently") {
    // Poisson-weighted central CDFs, summed from j = 0 with the test's own
    // gamma integration.
    auto reference = [](double x, int df, double ncp) {
        double total = 0.0;
        for (int j = 0; j < 80; ++j) {
            const double logw = -ncp / 2 + j * std::log(ncp / 2) - std::lgamma(j + 1.0);
            total += std::exp(logw) * oracle::chisq_cdf_by_integration(x, df + 2 * j);
        }
        return total;
    };
    CHECK(std::abs(chisq_cdf(12.0, {5, 10.0}) - reference(12.0, 5, 10.0)) < 1e-9);
    CHECK(std::abs(chisq_cdf(3.0, {1, 2.0}) - reference(3.0, 1, 2.0)) < 1e-9);
    CHECK(std::abs(chisq_cdf(40.0, {20, 15.0}) - reference(40.0, 20, 15.0)) < 1e-9);
}

TEST_CASE("noncentral CDF matches Monte Carlo at (5, 10, 12)") {
    std::mt19937_64 gen(8675309);
    std::normal_distribution<double> z;
    const double shift = std::sqrt(10.0);
    const long draws = 2'000'000; // the full 10^7-draw check runs in the acceptance suite
    long hits = 0;
    for (long i = 0; i < draws; ++i) {
        const double a = z(gen) + shift;
        double s = a * a;
        for (int k = 1; k < 5; ++k) {
            const double b = z(gen);
            s += b * b;
        }
        hits += s <= 12.0;
    }
    const double p = static_cast<double>(hits) / draws;
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(chisq_cdf(12.0, {5, 10.0}) - p) < 3 * se);
}

TEST_CASE("large noncentrality converges") {
    const double c = chisq_cdf(1.0e4, {10, 1.0e4});
    CHECK(c > 0.45);
    CHECK(c < 0.55);
    CHECK(chisq_sf(0.0, {3, 5.0}) == 1.0);
    CHECK(chisq_cdf(-1.0, {3, 5.0}) == 0.0);
}

TEST_CASE("upper tail stays accurate where the CDF saturates") {
    const double sf = chisq_sf(200.0, {5, 0.0});
    CHECK(sf > 0.0);
    CHECK(sf < 1e-38);
    CHECK(std::abs(chisq_sf(12.0, {5, 10.0}) + chisq_cdf(12.0, {5, 10.0}) - 1.0) < 1e-11);
}

TEST_CASE("CDFs are monotone and bounded") {
    for (double ncp : {0.0, 3.0, 25.0}) {
        double prev = 0.0;
        for (double x = 0.0; x < 80.0; x += 0.25) {
            const double c = chisq_cdf(x, {4, ncp});
            CHECK(c >= prev - 1e-15);
            CHECK(c <= 1.0);
            prev = c;
        }
    }
}

TEST_CASE("quantiles") {
    CHECK(std::abs(chisq_quantile(0.90, 2) - 4.605170) < 1e-6);
    CHECK(std::abs(chisq_quantile(0.90, 2) + 2.0 * std::log(0.1)) < 1e-8);
    const double oracle_q = oracle::invert_by_bisection(
        [](double x) { return oracle::chisq_cdf_by_integration(x, 1); }, 0.90, 0.0, 20.0);
    CHECK(std::abs(chisq_quantile(0.90, 1) - 2.70554) < 1e-4);
    CHECK(std::abs(chisq_quantile(0.90, 1) - oracle_q) < 1e-8);
    for (std::size_t df : {1u, 5u, 20u}) {
        for (double p : {0.5, 0.9, 0.99}) {
            CHECK(std::abs(chisq_cdf(chisq_quantile(p, df), {df, 0.0}) - p) < 1e-8);
        }
    }
    for (double bad : {0.0, 1.0, -0.1, 1.5}) {
        try {
            (void)chisq_quantile(bad, 3);
            FAIL("expected InvalidProbability");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidProbability);
        }
    }
}

TEST_CASE("sums of squared normals follow the central law") {
    std::mt19937_64 gen(31337);
    std::normal_distribution<double> z;
    for (std::size_t df : {1u, 5u}) {
        std::vector<double> sample(100'000);
        for (auto& s : sample) {
            s = 0.0;
            for (std::size_t k = 0; k < df; ++k) {
                const double v = z(gen);
                s += v * v;
            }
        }
        CHECK(oracle::ks_distance(sample, [df](double x) { return chisq_cdf(x, {df, 0.0}); }) < 0.01);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(chisq_cdf(1.0, {0, 0.0}), Error);
    CHECK_THROWS_AS(chisq_cdf(1.0, {2, -1.0}), Error);
    CHECK_THROWS_AS(chisq_cdf(1.0, {2, INFINITY}), Error);
}
