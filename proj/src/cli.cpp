/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/detail/format.hpp"
#include "sdmd/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace sdmd {

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")->required();
    cmd->add_option("--set", opts.overrides, "override a config key (key=value)");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides out_dir)");
    cmd->add_flag("--full-scale", opts.full_scale,
                  "run the Burgers' lattice at n0 = 40 instead of the desk-scale "
                  "config value");
}

ExperimentConfig load_config(const CommonOptions& opts) {
    std::vector<std::string> overrides = opts.overrides;
    if (opts.full_scale) {
        overrides.push_back("burgers_n0=40");
    }
    if (!opts.out_dir.empty()) {
        overrides.push_back("out_dir=" + opts.out_dir);
    }
    return parse_config_file(opts.config_path, overrides);
}

void print_train_report(const TrainReport& report) {
    std::cout << "trained: n_full=" << report.full_order << " m=" << report.sample_count
              << " omega_rows=" << report.omega_rows << " p=" << report.rank_p
              << " r=" << report.order_r << '\n';
    std::cout << "residual = " << detail::to_decimal(report.residual) << '\n';
    if (report.d_hat) {
        std::cout << "d_hat = " << detail::to_decimal(*report.d_hat) << '\n';
    }
    if (report.f_hat_norm) {
        std::cout << "f_hat_norm = " << detail::to_decimal(*report.f_hat_norm) << '\n';
    }
    std::cout << "validation_rel_l2 = " << detail::to_decimal(report.validation_rel_l2)
              << '\n';
    for (const std::string& warning : report.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    std::cout << "model written to " << report.model_path << '\n';
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"structured system identification from snapshot data"};
    app.require_subcommand(1);

    CommonOptions train_opts;
    CLI::App* train = app.add_subcommand("train", "simulate, fit, reduce and export");
    add_common(train, train_opts);

    CommonOptions test_opts;
    std::string model_path;
    CLI::App* test = app.add_subcommand("test", "evaluate a saved model on a test input");
    add_common(test, test_opts);
    test->add_option("--model", model_path, "model file produced by train")->required();

    CommonOptions svd_opts;
    CLI::App* svd = app.add_subcommand("svd-report",
                                       "write the normalized singular-value CSV");
    add_common(svd, svd_opts);

    std::string convert_to;
    double convert_dt = 0.0;
    std::string convert_in;
    std::string convert_out;
    CLI::App* convert = app.add_subcommand("convert",
                                           "convert a model file between discrete "
                                           "and continuous time");
    convert->add_option("--to", convert_to, "target kind: continuous or discrete")
        ->required();
    convert->add_option("--dt", convert_dt, "step size for --to discrete");
    convert->add_option("input", convert_in, "model file to read")->required();
    convert->add_option("output", convert_out, "model file to write")->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("sdmd");
        for (const std::string& arg : args) {
            argv.push_back(arg.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (train->parsed()) {
            print_train_report(run_train(load_config(train_opts)));
        } else if (test->parsed()) {
            const TestReport report = run_test(load_config(test_opts), model_path);
            std::cout << "test_rel_l2 = " << detail::to_decimal(report.rel_l2) << '\n';
        } else if (svd->parsed()) {
            const ExperimentConfig cfg = load_config(svd_opts);
            run_svd_report(cfg);
            std::cout << "svd report written to " << cfg.out_dir << "/svd.csv\n";
        } else if (convert->parsed()) {
            if (convert_to == "continuous") {
                save_model(discrete_to_continuous(load_discrete_model(convert_in)),
                           convert_out);
            } else if (convert_to == "discrete") {
                if (!(convert_dt > 0.0)) {
                    throw ConfigError("convert --to discrete needs --dt > 0");
                }
                save_model(continuous_to_discrete(load_continuous_model(convert_in),
                                                  convert_dt),
                           convert_out);
            } else {
                throw ConfigError("convert: --to must be continuous or discrete");
            }
            std::cout << "converted model written to " << convert_out << '\n';
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help and friends
        }
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PolicyError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace sdmd
