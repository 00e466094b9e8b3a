/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/types.hpp"

#include <variant>
#include <vector>

namespace sdmd {

/// amp · cos(freq·t) · exp(−decay·t)
struct CosineDecay {
    double amplitude = 1.0;
    double frequency = 1.0; // rad/s
    double decay = 0.0;     // 1/s
};

/// a1 · sin(f1·t) + a2 · cos(f2·t)
struct SinCosCombo {
    double a1 = 1.0;
    double f1 = 1.0;
    double a2 = 0.0;
    double f2 = 1.0;
};

/// amp · sgn(sin(freq·t)) with sgn(0) := +1.
struct SquareWave {
    double amplitude = 1.0;
    double frequency = 1.0; // rad/s
};

struct ZeroInput {};

/// Pre-sampled signal on a uniform grid of spacing `dt`. Evaluation rounds t
/// to the nearest grid index and clamps past the final sample.
struct CustomSamples {
    std::vector<double> samples;
    double dt = 1.0;
};

using InputSignal =
    std::variant<CosineDecay, SinCosCombo, SquareWave, ZeroInput, CustomSamples>;

/// Signal value at time t >= 0.
double evaluate(const InputSignal& signal, double t);

/// Samples the signal on the uniform grid t_k = k·dt, k = 0..m−1.
RowVector sample_signal(const InputSignal& signal, double dt, Index m);

} // namespace sdmd
