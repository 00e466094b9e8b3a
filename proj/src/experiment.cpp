/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/experiment.hpp"

#include "sdmd/detail/format.hpp"
#include "sdmd/snapshots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

namespace sdmd {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& where) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        values.push_back(detail::parse_double(trim(item), where));
    }
    if (values.empty()) {
        throw ConfigError(where + ": empty value");
    }
    return values;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto as_double = [&] { return detail::parse_double(value, "config " + key); };
    const auto as_index = [&] {
        const double v = as_double();
        if (v != std::floor(v)) {
            throw ConfigError("config " + key + ": expected an integer");
        }
        return static_cast<Index>(v);
    };
    const auto as_bool = [&] {
        if (value == "true" || value == "1") {
            return true;
        }
        if (value == "false" || value == "0") {
            return false;
        }
        throw ConfigError("config " + key + ": expected true/false");
    };

    if (key == "system") {
        cfg.system = value;
    } else if (key == "structure") {
        cfg.structure = parse_structure(value);
    } else if (key == "dt") {
        cfg.dt = as_double();
    } else if (key == "horizon") {
        cfg.horizon = as_double();
    } else if (key == "train_input") {
        cfg.train_input = value;
    } else if (key == "test_input") {
        cfg.test_input = value;
    } else if (key == "test_horizon") {
        cfg.test_horizon = as_double();
    } else if (key == "tau_p") {
        cfg.tau_p = as_double();
    } else if (key == "tau_r") {
        cfg.tau_r = as_double();
    } else if (key == "rank_r") {
        cfg.rank_r = as_index();
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "burgers_n0") {
        cfg.burgers.n0 = as_index();
    } else if (key == "burgers_nu") {
        cfg.burgers.nu = as_double();
    } else if (key == "burgers_L") {
        cfg.burgers.length = as_double();
    } else if (key == "burgers_output_index") {
        cfg.burgers.output_index = as_index();
    } else if (key == "vdp_mu") {
        cfg.vdp.mu = as_double();
    } else if (key == "vdp_a") {
        cfg.vdp.a = as_double();
    } else if (key == "vdp_b") {
        cfg.vdp.b = as_double();
    } else if (key == "x0") {
        cfg.x0 = parse_number_list(value, "config x0");
    } else if (key == "include_quadratic_output") {
        cfg.include_quadratic_output = as_bool();
    } else if (key == "save_artifacts") {
        cfg.save_artifacts = as_bool();
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_line(ExperimentConfig& cfg, std::string line, const std::string& where) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
        line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
        return;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        throw ConfigError(where + ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
        throw ConfigError(where + ": empty key or value in '" + line + "'");
    }
    apply_key(cfg, key, value);
}

void finalize(ExperimentConfig& cfg) {
    if (cfg.system.empty()) {
        throw ConfigError("config: 'system' is required");
    }
    if (cfg.system != "burgers" && cfg.system != "vdp" &&
        cfg.system.rfind("file:", 0) != 0) {
        throw ConfigError("config: system must be burgers, vdp or file:<path>");
    }
    if (!(cfg.dt > 0.0)) {
        throw ConfigError("config: dt must be positive");
    }
    if (!(cfg.horizon > 0.0)) {
        throw ConfigError("config: horizon must be positive");
    }
    if (cfg.train_input.empty()) {
        throw ConfigError("config: 'train_input' is required");
    }
    if (cfg.test_input.empty()) {
        cfg.test_input = cfg.train_input;
    }
    if (cfg.test_horizon == 0.0) {
        cfg.test_horizon = cfg.horizon;
    }
    if (cfg.tau_p && (!(*cfg.tau_p > 0.0) || !(*cfg.tau_p < 1.0))) {
        throw ConfigError("config: tau_p must lie in (0,1)");
    }
    if (cfg.tau_r && (!(*cfg.tau_r > 0.0) || !(*cfg.tau_r < 1.0))) {
        throw ConfigError("config: tau_r must lie in (0,1)");
    }
    if (cfg.tau_r && cfg.rank_r) {
        throw ConfigError("config: give either tau_r or rank_r, not both");
    }
    if (cfg.rank_r && *cfg.rank_r < 1) {
        throw ConfigError("config: rank_r must be positive");
    }
    cfg.structure.include_quadratic_output = cfg.include_quadratic_output;
}

Index snapshot_count(double horizon, double dt, const char* what) {
    const double ratio = horizon / dt;
    const auto m = static_cast<Index>(std::llround(ratio));
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-6) {
        throw ConfigError(std::string(what) +
                          ": horizon/dt must be a positive integer snapshot count");
    }
    return m;
}

// The sampled system an experiment identifies: either a structured discrete
// model (built systems and model files) or the oscillator chain.
struct TruthSystem {
    std::variant<DiscreteModel, VdpConfig> impl;
    double dt = 0.0;

    Index order() const {
        if (const auto* model = std::get_if<DiscreteModel>(&impl)) {
            return model->order;
        }
        return 6;
    }

    std::optional<RowVector> output_row() const {
        if (const auto* model = std::get_if<DiscreteModel>(&impl)) {
            if (model->C) {
                return RowVector(model->C->to_dense());
            }
            return std::nullopt;
        }
        return vdp_output_row();
    }

    SimulationResult simulate(const RowVector& u, const Vector& x0) const {
        if (const auto* model = std::get_if<DiscreteModel>(&impl)) {
            return simulate_discrete(*model, u, x0);
        }
        VdpSimulation sim = simulate_vdp(std::get<VdpConfig>(impl), u, dt, x0);
        return SimulationResult{std::move(sim.states), std::move(sim.outputs)};
    }
};

TruthSystem build_truth(const ExperimentConfig& cfg) {
    if (cfg.system == "vdp") {
        return TruthSystem{cfg.vdp, cfg.dt};
    }
    if (cfg.system == "burgers") {
        const ContinuousModel lattice = build_burgers_quadratic(cfg.burgers);
        const ContinuousModel lifted = carleman_bilinearize(lattice);
        return TruthSystem{continuous_to_discrete(lifted, cfg.dt), cfg.dt};
    }
    const std::string path = cfg.system.substr(5);
    AnyModel any = load_model(path);
    if (auto* continuous = std::get_if<ContinuousModel>(&any)) {
        return TruthSystem{continuous_to_discrete(*continuous, cfg.dt), cfg.dt};
    }
    DiscreteModel model = std::get<DiscreteModel>(std::move(any));
    if (std::abs(model.dt - cfg.dt) > 1e-12 * cfg.dt) {
        throw ConfigError("system model was sampled at dt = " +
                          detail::to_decimal(model.dt) +
                          ", config asks for dt = " + detail::to_decimal(cfg.dt));
    }
    return TruthSystem{std::move(model), cfg.dt};
}

Vector initial_state(const ExperimentConfig& cfg, Index n) {
    if (cfg.x0.empty() || (cfg.x0.size() == 1 && cfg.x0[0] == 0.0)) {
        return Vector::Zero(n);
    }
    if (static_cast<Index>(cfg.x0.size()) != n) {
        throw ConfigError("config x0: expected " + std::to_string(n) + " entries, got " +
                          std::to_string(cfg.x0.size()));
    }
    return Eigen::Map<const Vector>(cfg.x0.data(), n);
}

// Output trajectory of a fitted model: its own output equation when present,
// otherwise the original system's observation map applied to the lifted
// states.
RowVector fitted_output(const DiscreteModel& model, const SimulationResult& sim,
                        const std::optional<RowVector>& truth_row, Index m) {
    if (sim.outputs) {
        return *sim.outputs;
    }
    if (!truth_row) {
        throw ConfigError("no observation map available: the fitted structure has no "
                          "output equation and the system provides none");
    }
    const Matrix states = sim.states.leftCols(m);
    if (model.basis) {
        return *truth_row * (*model.basis * states);
    }
    if (truth_row->size() != states.rows()) {
        throw ConfigError("observation map does not match the fitted model order");
    }
    return *truth_row * states;
}

Vector reduced_initial_state(const DiscreteModel& model, const Vector& x0_full) {
    if (model.basis) {
        return model.basis->transpose() * x0_full;
    }
    if (x0_full.size() != model.order) {
        throw ConfigError("initial state does not match the model order");
    }
    return x0_full;
}

void write_output_csv(const std::string& path, double dt, const RowVector& y_ref,
                      const RowVector& y_fit) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    const RowVector abs_err = absolute_error_series(y_ref, y_fit);
    out << "t,y_ref,y_fit,abs_error\n";
    for (Index k = 0; k < y_ref.size(); ++k) {
        out << detail::to_decimal(static_cast<double>(k) * dt) << ','
            << detail::to_decimal(y_ref(k)) << ',' << detail::to_decimal(y_fit(k))
            << ',' << detail::to_decimal(abs_err(k)) << '\n';
    }
}

void write_svd_csv(const std::string& path, const Vector& omega_spectrum,
                   const Vector& gamma_spectrum) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    out << "index,sigma_omega_normalized,sigma_gamma_normalized\n";
    const Index rows = std::max(omega_spectrum.size(), gamma_spectrum.size());
    const double omega_top = omega_spectrum.size() ? omega_spectrum(0) : 1.0;
    const double gamma_top = gamma_spectrum.size() ? gamma_spectrum(0) : 1.0;
    for (Index i = 0; i < rows; ++i) {
        out << (i + 1) << ',';
        if (i < omega_spectrum.size()) {
            out << detail::to_decimal(omega_spectrum(i) / omega_top);
        }
        out << ',';
        if (i < gamma_spectrum.size()) {
            out << detail::to_decimal(gamma_spectrum(i) / gamma_top);
        }
        out << '\n';
    }
}

TruncationPolicy reduction_policy(const ExperimentConfig& cfg) {
    if (cfg.tau_r) {
        return RelativeTolerance{*cfg.tau_r};
    }
    if (cfg.rank_r) {
        return FixedRank{*cfg.rank_r};
    }
    throw ConfigError("config: training needs tau_r or rank_r");
}

} // namespace

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    ExperimentConfig cfg;
    std::string line;
    Index line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        apply_line(cfg, line, path + ":" + std::to_string(line_no));
    }
    for (const std::string& override_kv : overrides) {
        apply_line(cfg, override_kv, "override");
    }
    finalize(cfg);
    return cfg;
}

InputSignal make_signal(const std::string& spec, double dt, Index m) {
    std::string name = spec;
    std::vector<double> params;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        params = parse_number_list(spec.substr(colon + 1), "signal '" + name + "'");
    }
    const auto expect = [&](std::size_t count) {
        if (params.size() != count) {
            throw ConfigError("signal '" + name + "': expected " +
                              std::to_string(count) + " parameters");
        }
    };

    if (name == "zero") {
        expect(0);
        return ZeroInput{};
    }
    if (name == "cosine-decay") {
        expect(3);
        return CosineDecay{params[0], params[1], params[2]};
    }
    if (name == "sincos") {
        expect(4);
        return SinCosCombo{params[0], params[1], params[2], params[3]};
    }
    if (name == "square") {
        expect(2);
        return SquareWave{params[0], params[1]};
    }
    if (name == "square-scaled") {
        expect(4);
        const SquareWave wave{params[0], params[1]};
        CustomSamples custom;
        custom.dt = dt;
        custom.samples.resize(static_cast<std::size_t>(m));
        for (Index k = 0; k < m; ++k) {
            const double t = static_cast<double>(k) * dt;
            custom.samples[static_cast<std::size_t>(k)] =
                evaluate(InputSignal{wave}, t) / (params[2] + params[3] * t);
        }
        return custom;
    }
    throw ConfigError("unknown signal '" + name + "'");
}

TrainReport run_train(const ExperimentConfig& cfg) {
    const Index m = snapshot_count(cfg.horizon, cfg.dt, "train");
    const RowVector u = sample_signal(make_signal(cfg.train_input, cfg.dt, m), cfg.dt, m);

    const TruthSystem truth = build_truth(cfg);
    const Vector x0 = initial_state(cfg, truth.order());
    const SimulationResult truth_sim = truth.simulate(u, x0);

    TrainReport report;
    if (cfg.structure.has_input() && u.cwiseAbs().maxCoeff() == 0.0) {
        report.warnings.push_back(
            "zero input signal: input-dependent blocks are unidentifiable and will "
            "be driven to zero by the pseudoinverse");
    }
    if (cfg.structure.has_output() && !truth_sim.outputs) {
        throw ConfigError("structure '" + cfg.structure.name() +
                          "' needs outputs but the system has no observation map");
    }

    const SnapshotSet snap = from_trajectory(truth_sim.states, u, truth_sim.outputs,
                                             cfg.dt);
    const RegressorBundle bundle = assemble_omega(snap, cfg.structure);

    const TruncationPolicy policy_p = RelativeTolerance{cfg.tau_p.value_or(kPrecisionTau)};
    FullOrderBlocks fit = fit_full(bundle, policy_p);

    Reduction red = reduce(fit, snap.Xs, reduction_policy(cfg), cfg.dt);
    report.warnings.insert(report.warnings.end(), fit.warnings.begin(),
                           fit.warnings.end());
    report.warnings.insert(report.warnings.end(), red.warnings.begin(),
                           red.warnings.end());

    const ContinuousModel continuous = discrete_to_continuous(red.model);

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    const std::string model_path = (out_dir / "model.txt").string();
    save_model(continuous, model_path);

    // Validate on the training data.
    if (!truth_sim.outputs) {
        throw ConfigError("the system has no observation map; cannot validate outputs");
    }
    const Vector x0_reduced = reduced_initial_state(red.model, x0);
    const SimulationResult fit_sim = simulate_discrete(red.model, u, x0_reduced);
    const RowVector& y_ref = *truth_sim.outputs;
    const RowVector y_fit = fitted_output(red.model, fit_sim, truth.output_row(), m);

    report.full_order = truth.order();
    report.sample_count = m;
    report.omega_rows = bundle.omega.rows();
    report.rank_p = fit.rank_p;
    report.order_r = red.model.order;
    report.residual = fit.residual;
    report.validation_rel_l2 = relative_output_error(y_ref, y_fit);
    if (continuous.D) {
        report.d_hat = continuous.D->scalar();
    }
    if (continuous.F) {
        report.f_hat_norm = continuous.F->to_dense().norm();
    }
    report.model_path = model_path;

    write_output_csv((out_dir / "train_outputs.csv").string(), cfg.dt, y_ref, y_fit);
    write_svd_csv((out_dir / "svd.csv").string(), fit.omega_spectrum,
                  singular_spectrum(bundle.gamma));

    std::ofstream rep((out_dir / "train_report.txt").string());
    rep << "system = " << cfg.system << '\n';
    rep << "structure = " << cfg.structure.name() << '\n';
    rep << "full_order = " << report.full_order << '\n';
    rep << "sample_count = " << report.sample_count << '\n';
    rep << "omega_rows = " << report.omega_rows << '\n';
    rep << "p = " << report.rank_p << '\n';
    rep << "r = " << report.order_r << '\n';
    rep << "residual = " << detail::to_decimal(report.residual) << '\n';
    if (report.d_hat) {
        rep << "d_hat = " << detail::to_decimal(*report.d_hat) << '\n';
    }
    if (report.f_hat_norm) {
        rep << "f_hat_norm = " << detail::to_decimal(*report.f_hat_norm) << '\n';
    }
    rep << "validation_rel_l2 = " << detail::to_decimal(report.validation_rel_l2)
        << '\n';
    for (const std::string& warning : report.warnings) {
        rep << "warning = " << warning << '\n';
    }

    if (cfg.save_artifacts) {
        save_csv(snap, (out_dir / "snapshots.csv").string());
        save_model(to_discrete_model(fit, cfg.dt), (out_dir / "full_order.txt").string());
    }
    return report;
}

TestReport run_test(const ExperimentConfig& cfg, const std::string& model_path) {
    AnyModel any = load_model(model_path);
    DiscreteModel model = std::holds_alternative<ContinuousModel>(any)
                              ? continuous_to_discrete(
                                    std::get<ContinuousModel>(any), cfg.dt)
                              : std::get<DiscreteModel>(std::move(any));
    if (std::abs(model.dt - cfg.dt) > 1e-12 * cfg.dt) {
        throw ConfigError("model was sampled at dt = " + detail::to_decimal(model.dt) +
                          ", config asks for dt = " + detail::to_decimal(cfg.dt));
    }
    if (!(model.structure == cfg.structure)) {
        throw ConfigError("structure mismatch: model is '" + model.structure.name() +
                          "', config says '" + cfg.structure.name() + "'");
    }

    const Index m = snapshot_count(cfg.test_horizon, cfg.dt, "test");
    const RowVector u = sample_signal(make_signal(cfg.test_input, cfg.dt, m), cfg.dt, m);

    const TruthSystem truth = build_truth(cfg);
    const Vector x0 = initial_state(cfg, truth.order());
    const SimulationResult truth_sim = truth.simulate(u, x0);
    if (!truth_sim.outputs) {
        throw ConfigError("test: the system has no observation map");
    }

    const Vector x0_model = reduced_initial_state(model, x0);
    const SimulationResult model_sim = simulate_discrete(model, u, x0_model);

    const RowVector& y_ref = *truth_sim.outputs;
    const RowVector y_fit = fitted_output(model, model_sim, truth.output_row(), m);

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    write_output_csv((out_dir / "test_outputs.csv").string(), cfg.dt, y_ref, y_fit);

    TestReport report;
    report.sample_count = m;
    report.rel_l2 = relative_output_error(y_ref, y_fit);

    std::ofstream rep((out_dir / "test_report.txt").string());
    rep << "model = " << model_path << '\n';
    rep << "test_input = " << cfg.test_input << '\n';
    rep << "sample_count = " << report.sample_count << '\n';
    rep << "rel_l2 = " << detail::to_decimal(report.rel_l2) << '\n';
    return report;
}

void run_svd_report(const ExperimentConfig& cfg) {
    const Index m = snapshot_count(cfg.horizon, cfg.dt, "svd-report");
    const RowVector u = sample_signal(make_signal(cfg.train_input, cfg.dt, m), cfg.dt, m);
    const TruthSystem truth = build_truth(cfg);
    const SimulationResult sim = truth.simulate(u, initial_state(cfg, truth.order()));
    if (cfg.structure.has_output() && !sim.outputs) {
        throw ConfigError("structure '" + cfg.structure.name() +
                          "' needs outputs but the system has no observation map");
    }
    const SnapshotSet snap = from_trajectory(sim.states, u, sim.outputs, cfg.dt);
    const RegressorBundle bundle = assemble_omega(snap, cfg.structure);

    fs::create_directories(cfg.out_dir);
    write_svd_csv((fs::path(cfg.out_dir) / "svd.csv").string(),
                  singular_spectrum(bundle.omega), singular_spectrum(bundle.gamma));
}

} // namespace sdmd
