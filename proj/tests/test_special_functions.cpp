#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "splinegabor/special_functions.hpp"
#include "test_oracles.hpp"

using namespace splinegabor;

TEST_CASE("J0 tends to one at the origin") {
    CHECK_THAT(bessel_jy(0, 1e-8).j, Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("nonpositive arguments are rejected") {
    CHECK_THROWS_AS(bessel_jy(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_jy(3, -2.0), std::domain_error);
}

TEST_CASE("Wronskian identity across orders and arguments") {
    for (double z : {1.0, 5.0, 15.0, 40.0}) {
        const auto b = bessel_jy_upto(51, z);
        const double expected = 2.0 / (detail::pi * z);
        for (int n = 0; n <= 50; ++n) {
            const double w = b[static_cast<std::size_t>(n) + 1].j * b[static_cast<std::size_t>(n)].y -
                             b[static_cast<std::size_t>(n)].j * b[static_cast<std::size_t>(n) + 1].y;
            INFO("n " << n << " z " << z);
            CHECK(std::abs(w - expected) <= 1e-10 * expected);
        }
    }
}

TEST_CASE("J0(1) matches the extended-precision series oracle") {
    const double oracle = static_cast<double>(oracles::bessel_j_series(0, 1.0L));
    REQUIRE_THAT(oracle, Catch::Matchers::WithinAbs(0.7651976865579666, 1e-14));
    CHECK_THAT(bessel_jy(0, 1.0).j, Catch::Matchers::WithinAbs(0.7651976865579666, 1e-13));
}

TEST_CASE("J and Y agree with the series oracle on both branches") {
    for (double z : {0.5, 1.0, 5.0, 9.0, 12.5, 13.5, 16.0, 20.0}) {
        const auto y_oracle = oracles::bessel_y_series_upto(20, static_cast<long double>(z));
        const auto computed = bessel_jy_upto(20, z);
        const double amplitude = std::sqrt(2.0 / (detail::pi * z));
        for (int n : {0, 1, 2, 5, 10, 20}) {
            const double j_oracle = static_cast<double>(oracles::bessel_j_series(n, z));
            INFO("n " << n << " z " << z);
            CHECK(std::abs(computed[static_cast<std::size_t>(n)].j - j_oracle) <=
                  1e-10 * std::max(std::abs(j_oracle), amplitude));
            const double yo = static_cast<double>(y_oracle[static_cast<std::size_t>(n)]);
            CHECK(std::abs(computed[static_cast<std::size_t>(n)].y - yo) <=
                  1e-10 * std::max(std::abs(yo), amplitude));
        }
    }
}

TEST_CASE("derivative of H0 is minus H1") {
    for (double z : {0.3, 2.0, 7.0, 30.0}) {
        const auto lhs = hankel1_derivative(0, z);
        const auto rhs = -hankel1(1, z);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("H0 magnitude follows the leading asymptotic") {
    const double z = 80.0;
    const double expected = std::sqrt(2.0 / (detail::pi * z));
    CHECK(std::abs(std::abs(hankel1(0, z)) - expected) <= 0.02 * expected);
}

TEST_CASE("H1 matches a finite difference of H0") {
    const double z = 5.0, h = 1e-6;
    const auto fd = (hankel1(0, z + h) - hankel1(0, z - h)) / (2.0 * h);
    CHECK(std::abs(-fd - hankel1(1, z)) <= 1e-5);
}

TEST_CASE("forward Y recurrence stays consistent at moderate order") {
    const auto computed = bessel_jy_upto(12, 7.0);
    const auto oracle = oracles::bessel_y_series_upto(12, 7.0L);
    for (int n = 0; n <= 12; ++n)
        CHECK(std::abs(computed[static_cast<std::size_t>(n)].y -
                       static_cast<double>(oracle[static_cast<std::size_t>(n)])) <= 1e-11 *
              std::max(1.0, std::abs(static_cast<double>(oracle[static_cast<std::size_t>(n)]))));
}
