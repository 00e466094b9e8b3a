/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/signals.hpp"

#include <cmath>

namespace sdmd {

namespace {

// sgn with sgn(0) = +1, the convention used by the square wave.
double sgn(double v) {
    return v < 0.0 ? -1.0 : 1.0;
}

struct Evaluator {
    double t;

    double operator()(const CosineDecay& s) const {
        return s.amplitude * std::cos(s.frequency * t) * std::exp(-s.decay * t);
    }
    double operator()(const SinCosCombo& s) const {
        return s.a1 * std::sin(s.f1 * t) + s.a2 * std::cos(s.f2 * t);
    }
    double operator()(const SquareWave& s) const {
        return s.amplitude * sgn(std::sin(s.frequency * t));
    }
    double operator()(const ZeroInput&) const { return 0.0; }
    double operator()(const CustomSamples& s) const {
        if (s.samples.empty()) {
            throw DimensionError("CustomSamples: no samples");
        }
        auto k = static_cast<std::size_t>(std::llround(t / s.dt));
        if (k >= s.samples.size()) {
            k = s.samples.size() - 1;
        }
        return s.samples[k];
    }
};

} // namespace

double evaluate(const InputSignal& signal, double t) {
    return std::visit(Evaluator{t}, signal);
}

RowVector sample_signal(const InputSignal& signal, double dt, Index m) {
    if (!(dt > 0.0)) {
        throw DimensionError("sample_signal: dt must be positive");
    }
    if (m < 1) {
        throw DimensionError("sample_signal: need at least one sample");
    }
    RowVector out(m);
    for (Index k = 0; k < m; ++k) {
        out(k) = evaluate(signal, static_cast<double>(k) * dt);
    }
    return out;
}

} // namespace sdmd
