/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/model.hpp"
#include "sdmd/regression.hpp"
#include "sdmd/signals.hpp"
#include "sdmd/systems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sdmd {

/// Relative cut used for the pseudoinverse when no tau_p is configured: keeps
/// every singular value meaningfully above machine precision.
inline constexpr double kPrecisionTau = 1e-13;

/// One experiment: which system to sample, which structure to fit, the
/// sampling grid, input signals and truncation rules.
struct ExperimentConfig {
    std::string system; // "burgers", "vdp" or "file:<model path>"
    ModelStructure structure;
    double dt = 0.0;
    double horizon = 0.0;           // training horizon, seconds
    std::string train_input;        // signal spec, see make_signal()
    std::string test_input;         // defaults to train_input
    double test_horizon = 0.0;      // defaults to horizon
    std::optional<double> tau_p;    // pseudoinverse cut; default kPrecisionTau
    std::optional<double> tau_r;    // reduction tolerance ...
    std::optional<Index> rank_r;    // ... or fixed reduced order (exactly one)
    std::string out_dir = "out";
    BurgersConfig burgers;
    VdpConfig vdp;
    std::vector<double> x0;         // empty or {0} means the zero state
    bool include_quadratic_output = true;
    bool save_artifacts = false;    // also write snapshots.csv + full_order.txt
};

/// Flat key=value config file ('#' comments). `overrides` are further
/// key=value pairs applied on top. Throws ConfigError on malformed input.
ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides = {});

/// Builds an input signal from a spec string:
///   zero
///   cosine-decay:amp,freq,decay        amp·cos(freq·t)·exp(−decay·t)
///   sincos:a1,f1,a2,f2                 a1·sin(f1·t) + a2·cos(f2·t)
///   square:amp,freq                    amp·sgn(sin(freq·t)), sgn(0) = +1
///   square-scaled:amp,freq,c0,c1       amp·sgn(sin(freq·t))/(c0 + c1·t),
///                                      pre-sampled on the (dt, m) grid
InputSignal make_signal(const std::string& spec, double dt, Index m);

struct TrainReport {
    Index full_order = 0;
    Index sample_count = 0;
    Index omega_rows = 0;
    Index rank_p = 0;
    Index order_r = 0;
    double residual = 0.0;
    double validation_rel_l2 = 0.0;
    std::optional<double> d_hat;      // feed-through D of the continuous model
    std::optional<double> f_hat_norm; // ‖F̂‖₂
    std::vector<std::string> warnings;
    std::string model_path;
};

/// Simulates the configured system, fits and reduces the configured
/// structure, converts to continuous time and writes model.txt, svd.csv,
/// train_outputs.csv and train_report.txt under cfg.out_dir.
TrainReport run_train(const ExperimentConfig& cfg);

struct TestReport {
    Index sample_count = 0;
    double rel_l2 = 0.0;
};

/// Simulates the original system and a saved model under the test input over
/// the test horizon; writes test_outputs.csv and test_report.txt.
TestReport run_test(const ExperimentConfig& cfg, const std::string& model_path);

/// Writes svd.csv (normalized spectra of Ω and Γ) without fitting.
void run_svd_report(const ExperimentConfig& cfg);

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

} // namespace sdmd
