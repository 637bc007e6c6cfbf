#include "ribbonlim/kernel.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using ribbonlim::eval_g;
using ribbonlim::g_series;

TEST_CASE("g at the branch points") {
    CHECK(eval_g(0.0) == 1.0);
    CHECK(eval_g(2.0) == std::numeric_limits<double>::infinity());
    CHECK(eval_g(-2.0) == std::numeric_limits<double>::infinity());
    CHECK(eval_g(2.5) == std::numeric_limits<double>::infinity());
    CHECK(eval_g(-100.0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("g(1) equals ln 3") {
    CHECK(std::abs(eval_g(1.0) - std::log(3.0)) < 1e-15);
    CHECK(eval_g(-1.0) == eval_g(1.0));
}

TEST_CASE("g is even bit-for-bit") {
    for (int i = 1; i < 2000; ++i) {
        const double x = 2.0 * i / 2000.0;
        CHECK(eval_g(x) == eval_g(-x));
    }
}

TEST_CASE("g >= 1 with equality only at 0, strictly increasing in |x|") {
    double prev = 1.0;
    for (int i = 1; i < 20000; ++i) {
        const double x = 2.0 * i / 20000.0;
        const double g = eval_g(x);
        CHECK(g > 1.0);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("series agrees with the closed form on [0, 0.5]") {
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.5 * i / 1000.0;
        CHECK(std::abs(eval_g(x) - g_series(x)) <= 1e-4);
    }
}

TEST_CASE("closed form and series match across the switch at 1e-3") {
    for (double x : {9.999e-4, 1.0e-3, 1.0001e-3, 5e-4, 2e-3}) {
        const double direct = std::log((2.0 + x) / (2.0 - x)) / x;
        CHECK(std::abs(eval_g(x) - direct) < 1e-11);
    }
}
