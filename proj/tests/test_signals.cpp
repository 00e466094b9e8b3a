/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdmd/signals.hpp"

#include <cmath>

using namespace sdmd;

TEST_CASE("zero input samples to zeros") {
    const RowVector u = sample_signal(ZeroInput{}, 0.5, 3);
    REQUIRE(u.size() == 3);
    CHECK(u.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decaying cosine starts at its amplitude") {
    const RowVector u = sample_signal(CosineDecay{0.5, 10.0, 0.3}, 0.01, 4);
    CHECK(u(0) == 0.5); // cos(0)·e^0 = 1
    CHECK(u(1) == 0.5 * std::cos(0.1) * std::exp(-0.003));
}

TEST_CASE("sin/cos combination matches its closed form") {
    const RowVector u = sample_signal(SinCosCombo{0.25, 4.0, -0.2, 5.0}, 0.1, 8);
    for (Index k = 0; k < 8; ++k) {
        const double t = 0.1 * static_cast<double>(k);
        CHECK(u(k) == 0.25 * std::sin(4.0 * t) - 0.2 * std::cos(5.0 * t));
    }
}

TEST_CASE("square wave follows sgn(sin) with sgn(0) = +1") {
    // freq 10, dt 0.01: phase k/10 stays below pi through k = 31.
    const RowVector u = sample_signal(SquareWave{30.0, 10.0}, 0.01, 64);
    CHECK(u(0) == 30.0); // sin(0) = 0 resolves to +1
    for (Index k = 0; k < 64; ++k) {
        const double s = std::sin(10.0 * 0.01 * static_cast<double>(k));
        const double expected = (s < 0.0 ? -30.0 : 30.0);
        CHECK(u(k) == expected);
        if (k <= 31) {
            CHECK(u(k) == 30.0);
        }
        if (k == 32) {
            CHECK(u(k) == -30.0);
        }
    }
}

TEST_CASE("custom samples index the grid and clamp at the end") {
    CustomSamples custom;
    custom.dt = 0.5;
    custom.samples = {1.0, 2.0, 3.0};
    CHECK(evaluate(InputSignal{custom}, 0.0) == 1.0);
    CHECK(evaluate(InputSignal{custom}, 1.0) == 3.0);
    CHECK(evaluate(InputSignal{custom}, 7.5) == 3.0);
}

TEST_CASE("sampling is pure") {
    const InputSignal sig = CosineDecay{1.5, 3.0, 0.1};
    const RowVector a = sample_signal(sig, 0.02, 100);
    const RowVector b = sample_signal(sig, 0.02, 100);
    CHECK(a == b);
}

TEST_CASE("sampling validates its grid") {
    CHECK_THROWS_AS(sample_signal(ZeroInput{}, 0.0, 3), DimensionError);
    CHECK_THROWS_AS(sample_signal(ZeroInput{}, 0.1, 0), DimensionError);
}
