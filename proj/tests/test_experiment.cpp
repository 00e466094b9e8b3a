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

#include "sdmd/experiment.hpp"
#include "sdmd/snapshots.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sdmd;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = SDMD_CONFIG_DIR;

std::string fresh_dir(const char* tag) {
    const auto dir = fs::temp_directory_path() / "sdmd_experiments" / tag;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double report_value(const std::string& report_text, const std::string& key) {
    std::stringstream ss(report_text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key + " = ", 0) == 0) {
            return std::stod(line.substr(key.size() + 3));
        }
    }
    FAIL(("key not found in report: " + key).c_str());
    return 0.0;
}

} // namespace

TEST_CASE("config parsing applies keys, comments and overrides") {
    const std::string dir = fresh_dir("cfg");
    const std::string path = dir + "/exp.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "system = vdp\n";
        out << "structure = quadratic-bilinear-io\n";
        out << "dt = 0.01\n";
        out << "horizon = 5.0   # trailing comment\n";
        out << "train_input = square:30,10\n";
        out << "rank_r = 5\n";
    }
    const ExperimentConfig cfg = parse_config_file(path, {"vdp_mu=0.7", "out_dir=" + dir});
    CHECK(cfg.system == "vdp");
    CHECK(cfg.structure.kind == StructureKind::QuadraticBilinearIO);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.horizon == 5.0);
    CHECK(cfg.test_input == cfg.train_input); // defaulted
    CHECK(cfg.test_horizon == 5.0);
    CHECK(cfg.vdp.mu == 0.7);
    CHECK(cfg.rank_r == 5);
    CHECK(cfg.out_dir == dir);
}

TEST_CASE("config parsing rejects malformed input") {
    const std::string dir = fresh_dir("cfg_bad");
    const auto write_cfg = [&](const char* body) {
        const std::string path = dir + "/bad.cfg";
        std::ofstream out(path);
        out << body;
        return path;
    };
    CHECK_THROWS_AS(parse_config_file(dir + "/missing.cfg"), ConfigError);
    CHECK_THROWS_AS(parse_config_file(write_cfg("nonsense\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(write_cfg("unknown_key = 3\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file(write_cfg("system = mars\ndt = 0.1\n"
                                                "horizon = 1\ntrain_input = zero\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_file(write_cfg("system = vdp\nstructure = bilinear\ndt = 0.1\n"
                                    "horizon = 1\ntrain_input = zero\n"
                                    "tau_r = 1e-4\nrank_r = 3\n")),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_file(write_cfg("system = vdp\nstructure = bilinear\ndt = 0.1\n"
                                    "horizon = 1\ntrain_input = zero\ntau_p = 2\n")),
        ConfigError);
}

TEST_CASE("signal specs parse to the documented families") {
    CHECK(std::holds_alternative<ZeroInput>(make_signal("zero", 0.1, 10)));
    CHECK(std::holds_alternative<CosineDecay>(make_signal("cosine-decay:0.5,10,0.3",
                                                          0.1, 10)));
    CHECK(std::holds_alternative<SinCosCombo>(make_signal("sincos:0.25,4,-0.2,5",
                                                          0.1, 10)));
    CHECK(std::holds_alternative<SquareWave>(make_signal("square:30,10", 0.1, 10)));

    // The damped square wave is pre-sampled on the grid.
    const InputSignal u2 = make_signal("square-scaled:1,2,5,5", 0.5, 4);
    REQUIRE(std::holds_alternative<CustomSamples>(u2));
    const auto& samples = std::get<CustomSamples>(u2).samples;
    REQUIRE(samples.size() == 4);
    CHECK(samples[0] == 1.0 / 5.0);  // sgn(sin 0) = +1, 1/(5(0+1))
    CHECK(samples[1] == 1.0 / 7.5);  // sin(1) > 0, 1/(5(0.5+1))
    CHECK(samples[3] == 1.0 / 12.5); // sin(3) > 0, 1/(5(1.5+1))

    CHECK_THROWS_AS(make_signal("square:1", 0.1, 10), ConfigError);
    CHECK_THROWS_AS(make_signal("warble:1,2", 0.1, 10), ConfigError);
}

TEST_CASE("training the oscillator chain reproduces the documented shapes") {
    const std::string dir = fresh_dir("vdp_train");
    const ExperimentConfig cfg = parse_config_file(kConfigDir + "/vdp.cfg",
                                                   {"out_dir=" + dir,
                                                    "save_artifacts=true"});
    const TrainReport report = run_train(cfg);

    CHECK(report.full_order == 6);
    CHECK(report.sample_count == 500);
    CHECK(report.omega_rows == 49);
    CHECK(report.rank_p == 19);
    CHECK(report.order_r == 5);
    CHECK(report.validation_rel_l2 < 1e-2);

    CHECK(fs::exists(dir + "/model.txt"));
    CHECK(fs::exists(dir + "/svd.csv"));
    CHECK(fs::exists(dir + "/train_outputs.csv"));
    CHECK(fs::exists(dir + "/train_report.txt"));
    CHECK(fs::exists(dir + "/snapshots.csv"));
    CHECK(fs::exists(dir + "/full_order.txt"));

    // The saved model is a continuous-time quadratic-bilinear system of order 5.
    const ContinuousModel model = load_continuous_model(dir + "/model.txt");
    CHECK(model.order == 5);
    CHECK(model.structure.kind == StructureKind::QuadraticBilinearIO);
    REQUIRE(model.basis.has_value());
    CHECK(model.basis->rows() == 6);

    // CSV headers are pinned.
    CHECK(slurp(dir + "/svd.csv").rfind("index,sigma_omega_normalized,"
                                        "sigma_gamma_normalized\n", 0) == 0);
    CHECK(slurp(dir + "/train_outputs.csv").rfind("t,y_ref,y_fit,abs_error\n", 0) == 0);
}

TEST_CASE("report residual matches a recomputation from the saved artifacts") {
    const std::string dir = fresh_dir("vdp_residual");
    const ExperimentConfig cfg = parse_config_file(kConfigDir + "/vdp.cfg",
                                                   {"out_dir=" + dir,
                                                    "save_artifacts=true"});
    const TrainReport report = run_train(cfg);

    const SnapshotSet snap = load_csv(dir + "/snapshots.csv");
    const DiscreteModel full = load_discrete_model(dir + "/full_order.txt");
    const RegressorBundle bundle = assemble_omega(snap, full.structure);

    Matrix G(bundle.gamma.rows(), bundle.omega.rows());
    const Index n = full.order;
    G.block(0, 0, n, n) = full.A.dense();
    G.block(n, 0, 1, n) = full.C->dense();
    G.block(0, n, n, 1) = full.B->dense();
    G(n, n) = full.D->scalar();
    G.block(0, n + 1, n, n) = full.N->dense();
    G.block(n, n + 1, 1, n) = full.F->dense();
    G.block(0, 2 * n + 1, n, n * n) = full.Q->dense();
    G.block(n, 2 * n + 1, 1, n * n) = full.K->dense();

    const double recomputed = (bundle.gamma - G * bundle.omega).norm();
    CHECK(std::abs(recomputed - report.residual) < 1e-10);

    const double reported = report_value(slurp(dir + "/train_report.txt"), "residual");
    CHECK(reported == doctest::Approx(report.residual).epsilon(1e-15));
}

TEST_CASE("two identical runs produce byte-identical outputs") {
    const std::string dir_a = fresh_dir("det_a");
    const std::string dir_b = fresh_dir("det_b");
    run_train(parse_config_file(kConfigDir + "/vdp.cfg", {"out_dir=" + dir_a}));
    run_train(parse_config_file(kConfigDir + "/vdp.cfg", {"out_dir=" + dir_b}));
    CHECK(slurp(dir_a + "/model.txt") == slurp(dir_b + "/model.txt"));
    CHECK(slurp(dir_a + "/svd.csv") == slurp(dir_b + "/svd.csv"));
    CHECK(slurp(dir_a + "/train_outputs.csv") == slurp(dir_b + "/train_outputs.csv"));
    CHECK(slurp(dir_a + "/train_report.txt") == slurp(dir_b + "/train_report.txt"));
}

TEST_CASE("testing on the training input reproduces the validation numbers") {
    const std::string dir = fresh_dir("vdp_test");
    const ExperimentConfig cfg =
        parse_config_file(kConfigDir + "/vdp.cfg", {"out_dir=" + dir});
    const TrainReport train_report = run_train(cfg);
    const TestReport test_report = run_test(cfg, dir + "/model.txt");
    CHECK(test_report.sample_count == 500);
    CHECK(test_report.rel_l2 ==
          doctest::Approx(train_report.validation_rel_l2).epsilon(1e-6));
    CHECK(fs::exists(dir + "/test_outputs.csv"));
    CHECK(fs::exists(dir + "/test_report.txt"));
}

TEST_CASE("structure mismatch between model file and config is rejected") {
    const std::string dir = fresh_dir("vdp_mismatch");
    const ExperimentConfig cfg =
        parse_config_file(kConfigDir + "/vdp.cfg", {"out_dir=" + dir});
    run_train(cfg);
    const ExperimentConfig wrong = parse_config_file(
        kConfigDir + "/vdp.cfg", {"out_dir=" + dir, "structure=bilinear-io"});
    CHECK_THROWS_AS(run_test(wrong, dir + "/model.txt"), ConfigError);
}

TEST_CASE("zero input degrades gracefully: warning plus zero input blocks") {
    const std::string dir = fresh_dir("vdp_zero_input");
    const ExperimentConfig cfg = parse_config_file(
        kConfigDir + "/vdp.cfg",
        {"out_dir=" + dir, "train_input=zero", "x0=1,0,0,0,0,0", "rank_r=4",
         "structure=bilinear-io", "save_artifacts=true"});
    const TrainReport report = run_train(cfg);

    bool warned = false;
    for (const std::string& w : report.warnings) {
        warned = warned || w.find("zero input") != std::string::npos;
    }
    CHECK(warned);

    // Linear blocks are still returned; input-dependent blocks collapse to zero.
    const DiscreteModel full = load_discrete_model(dir + "/full_order.txt");
    CHECK(full.A.dense().norm() > 0.0);
    CHECK(full.B->dense().norm() < 1e-10);
    CHECK(full.N->dense().norm() < 1e-10);
}

TEST_CASE("svd-report writes the spectra without fitting") {
    const std::string dir = fresh_dir("vdp_svd");
    const ExperimentConfig cfg =
        parse_config_file(kConfigDir + "/vdp.cfg", {"out_dir=" + dir});
    run_svd_report(cfg);
    const std::string csv = slurp(dir + "/svd.csv");
    CHECK(csv.rfind("index,sigma_omega_normalized,sigma_gamma_normalized\n", 0) == 0);
    CHECK(csv.find("\n1,1,1\n") != std::string::npos); // both spectra normalized
}

TEST_CASE("cli subcommands wire up exit codes") {
    const std::string dir = fresh_dir("cli");
    const std::string vdp_cfg = kConfigDir + "/vdp.cfg";

    CHECK(run_cli({"train", "--config", vdp_cfg, "--out", dir}) == 0);
    CHECK(run_cli({"test", "--config", vdp_cfg, "--out", dir, "--model",
                   dir + "/model.txt"}) == 0);
    CHECK(run_cli({"svd-report", "--config", vdp_cfg, "--out", dir}) == 0);

    // convert: continuous -> discrete -> continuous
    const std::string d_path = dir + "/model_d.txt";
    const std::string c_path = dir + "/model_c.txt";
    CHECK(run_cli({"convert", "--to", "discrete", "--dt", "0.01",
                   dir + "/model.txt", d_path}) == 0);
    CHECK(run_cli({"convert", "--to", "continuous", d_path, c_path}) == 0);
    CHECK(load_continuous_model(c_path).order == 5);

    // config errors: missing file, bad key, wrong conversion direction
    CHECK(run_cli({"train", "--config", dir + "/nope.cfg"}) == 2);
    CHECK(run_cli({"train", "--config", vdp_cfg, "--set", "bogus=1"}) == 2);
    CHECK(run_cli({"convert", "--to", "discrete", d_path, c_path}) == 2);

    // numerical failure: identically zero training data
    CHECK(run_cli({"train", "--config", vdp_cfg, "--out", dir, "--set",
                   "train_input=zero"}) == 3);
}
