#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "smdagg/loss.hpp"

using smdagg::LossKind;
using smdagg::LossSpec;
using smdagg::loss_from_name;
using smdagg::make_loss;

TEST_CASE("squared loss values") {
    LossSpec loss = make_loss(LossKind::squared);
    CHECK(loss.value(1.0) == 0.0);
    CHECK(loss.value(-1.0) == 4.0);
    CHECK(loss.value(0.0) == 1.0);
}

TEST_CASE("squared loss derivative") {
    LossSpec loss = make_loss(LossKind::squared);
    CHECK(loss.derivative(1.0) == 0.0);
    CHECK(loss.derivative(0.0) == -2.0);
    CHECK(loss.derivative(-1.0) == -4.0);
}

TEST_CASE("lipschitz bound is the grid maximum of |derivative|") {
    LossSpec loss = make_loss(LossKind::squared);
    CHECK(loss.lipschitz_bound() == 4.0);

    double grid_max = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        double m = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        grid_max = std::max(grid_max, std::abs(loss.derivative(m)));
    }
    CHECK(std::abs(grid_max - loss.lipschitz_bound()) <= 1e-9);
    CHECK(loss.lipschitz_bound() >= std::abs(loss.derivative(0.0)));
}

TEST_CASE("probability link") {
    LossSpec loss = make_loss(LossKind::squared);
    CHECK(loss.prob_from_score(0.0) == 0.5);
    CHECK(loss.prob_from_score(1.0) == 1.0);
    CHECK(loss.prob_from_score(0.2) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(loss.prob_from_score(3.0) == 1.0);
    CHECK(loss.prob_from_score(-3.0) == 0.0);
}

TEST_CASE("derivative matches central finite differences") {
    LossSpec loss = make_loss(LossKind::squared);
    const double h = 1e-5;
    for (int i = 0; i <= 200; ++i) {
        double m = -1.0 + 0.01 * i;
        double fd = (loss.value(m + h) - loss.value(m - h)) / (2.0 * h);
        CHECK(std::abs(loss.derivative(m) - fd) <= 1e-6);
    }
}

TEST_CASE("link is nondecreasing and symmetric") {
    LossSpec loss = make_loss(LossKind::squared);
    double prev = loss.prob_from_score(-1.0);
    for (int i = 1; i <= 200; ++i) {
        double z = -1.0 + 0.01 * i;
        double p = loss.prob_from_score(z);
        CHECK(p >= prev);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(loss.prob_from_score(z) + loss.prob_from_score(-z) ==
              doctest::Approx(1.0).epsilon(1e-12));
        prev = p;
    }
}

TEST_CASE("midpoint convexity on the feasible range") {
    LossSpec loss = make_loss(LossKind::squared);
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            double a = -1.0 + 0.1 * i;
            double b = -1.0 + 0.1 * j;
            CHECK(loss.value(0.5 * (a + b)) <= 0.5 * (loss.value(a) + loss.value(b)) + 1e-12);
        }
    }
}

TEST_CASE("loss lookup by name") {
    CHECK(loss_from_name("squared").kind == LossKind::squared);
    CHECK_THROWS_AS(loss_from_name("hinge"), std::invalid_argument);
}
