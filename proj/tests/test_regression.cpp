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

#include "sdmd/regression.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace sdmd;
using test::random_matrix;
using test::random_vector;
using test::white_noise;

namespace {

SnapshotSet snapshots_from(const Matrix& X, const Matrix& Xs, const RowVector& U,
                           std::optional<RowVector> Y = std::nullopt, double dt = 0.1) {
    SnapshotSet snap;
    snap.X = X;
    snap.Xs = Xs;
    snap.U = U;
    snap.Y = std::move(Y);
    snap.dt = dt;
    return snap;
}

// Simulates a planted bilinear system and returns the snapshot set.
SnapshotSet simulate_bilinear(const Matrix& A, const Matrix& B, const Matrix& N,
                              const RowVector& u, double dt = 0.1) {
    const Index n = A.rows();
    const Index m = u.size();
    Matrix states(n, m + 1);
    states.col(0).setZero();
    for (Index k = 0; k < m; ++k) {
        states.col(k + 1) = A * states.col(k) + N * states.col(k) * u(k) +
                            B.col(0) * u(k);
    }
    return from_trajectory(states, u, std::nullopt, dt);
}

Matrix concat_state_blocks(const FullOrderBlocks& fit) {
    const Index n = fit.state_dim;
    Index cols = n;
    if (fit.B) {
        cols += 1;
    }
    if (fit.N) {
        cols += n;
    }
    if (fit.Q) {
        cols += n * n;
    }
    Matrix G(n, cols);
    Index at = 0;
    G.middleCols(at, n) = fit.A;
    at += n;
    if (fit.B) {
        G.middleCols(at, 1) = *fit.B;
        at += 1;
    }
    if (fit.N) {
        G.middleCols(at, n) = *fit.N;
        at += n;
    }
    if (fit.Q) {
        G.middleCols(at, n * n) = *fit.Q;
    }
    return G;
}

} // namespace

TEST_CASE("omega for the linear structure is X itself") {
    const Matrix X = random_matrix(3, 7, 1);
    const Matrix Xs = random_matrix(3, 7, 2);
    const auto bundle = assemble_omega(snapshots_from(X, Xs, RowVector::Zero(7)),
                                       ModelStructure{StructureKind::Linear});
    CHECK(bundle.omega == X);
    CHECK(bundle.gamma == Xs);
    REQUIRE(bundle.row_layout.size() == 1);
    CHECK(bundle.row_layout[0].block == RegressorBlockKind::State);
}

TEST_CASE("bilinear omega stacks X, U and the column-scaled X") {
    Matrix X(2, 2);
    X << 1, 2, 0, 1;
    RowVector U(2);
    U << 3, 4;
    const auto bundle =
        assemble_omega(snapshots_from(X, random_matrix(2, 2, 3), U),
                       ModelStructure{StructureKind::Bilinear});
    Matrix expected(5, 2);
    expected << 1, 2, 0, 1, 3, 4, 3, 8, 0, 4;
    CHECK(bundle.omega == expected);
    REQUIRE(bundle.row_layout.size() == 3);
    CHECK(bundle.row_layout[2].begin == 3);
    CHECK(bundle.row_layout[2].end == 5);
}

TEST_CASE("quadratic-bilinear omega has n^2 + 2n + 1 rows") {
    const Matrix X = random_matrix(2, 2, 4);
    const auto bundle =
        assemble_omega(snapshots_from(X, random_matrix(2, 2, 5), RowVector::Ones(2)),
                       ModelStructure{StructureKind::QuadraticBilinear});
    CHECK(bundle.omega.rows() == 9);
}

TEST_CASE("gamma stacks the output row for io structures") {
    const Matrix X = random_matrix(3, 5, 6);
    const Matrix Xs = random_matrix(3, 5, 7);
    const RowVector U = white_noise(5, 8);
    const RowVector Y = white_noise(5, 9);

    CHECK(assemble_gamma(snapshots_from(X, Xs, U), ModelStructure{StructureKind::Linear})
          == Xs);
    const Matrix gamma = assemble_gamma(snapshots_from(X, Xs, U, Y),
                                        ModelStructure{StructureKind::LinearIO});
    REQUIRE(gamma.rows() == 4);
    CHECK(gamma.topRows(3) == Xs);
    CHECK(gamma.bottomRows(1) == Y);
}

TEST_CASE("io structures require outputs") {
    const Matrix X = random_matrix(2, 4, 10);
    CHECK_THROWS_AS(assemble_omega(snapshots_from(X, X, RowVector::Zero(4)),
                                   ModelStructure{StructureKind::BilinearIO}),
                    DimensionError);
}

TEST_CASE("exact recovery of a planted linear system") {
    const Matrix A = test::stable_matrix(3, 20, 0.8);
    Matrix states(3, 51);
    states.col(0) = random_vector(3, 21);
    for (Index k = 0; k < 50; ++k) {
        states.col(k + 1) = A * states.col(k);
    }
    const auto snap = from_trajectory(states, RowVector::Zero(50), std::nullopt, 0.1);
    const auto bundle = assemble_omega(snap, ModelStructure{StructureKind::Linear});
    const auto fit = fit_full(bundle, FixedRank{3});
    CHECK(test::rel_error(fit.A, A) < 1e-9);
    CHECK(fit.residual < 1e-10);
}

TEST_CASE("exact recovery of a planted bilinear system") {
    const Index n = 4;
    const Matrix A = test::stable_matrix(n, 30, 0.85);
    const Matrix B = random_matrix(n, 1, 31);
    Matrix N = random_matrix(n, n, 32);
    N *= 0.3 / N.norm();

    const auto snap = simulate_bilinear(A, B, N, white_noise(200, 33));
    const auto bundle = assemble_omega(snap, ModelStructure{StructureKind::Bilinear});
    const auto fit = fit_full(bundle, FixedRank{2 * n + 1});

    Matrix planted(n, 2 * n + 1);
    planted << A, B, N;
    CHECK(test::rel_error(concat_state_blocks(fit), planted) < 1e-8);
}

TEST_CASE("quadratic recovery matches up to slot symmetrization") {
    const Index n = 3;
    const Matrix A = test::stable_matrix(n, 40, 0.7);
    const Matrix B = 0.5 * random_matrix(n, 1, 41);
    Matrix N = random_matrix(n, n, 42);
    N *= 0.2 / N.norm();
    // Planted Q with symmetric Kronecker slots.
    Matrix Q0 = random_matrix(n, n * n, 43);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = j + 1; k < n; ++k) {
                const double avg = 0.5 * (Q0(i, j * n + k) + Q0(i, k * n + j));
                Q0(i, j * n + k) = avg;
                Q0(i, k * n + j) = avg;
            }
        }
    }
    Q0 *= 0.1 / Q0.norm();

    const RowVector u = white_noise(200, 44);
    Matrix states(n, 201);
    states.col(0).setZero();
    for (Index k = 0; k < 200; ++k) {
        const Vector x = states.col(k);
        Vector xx(n * n);
        for (Index j = 0; j < n; ++j) {
            xx.segment(j * n, n) = x(j) * x;
        }
        states.col(k + 1) = A * x + Q0 * xx + N * x * u(k) + B.col(0) * u(k);
    }
    REQUIRE(states.cwiseAbs().maxCoeff() < 10.0);

    const auto snap = from_trajectory(states, u, std::nullopt, 0.1);
    const auto bundle =
        assemble_omega(snap, ModelStructure{StructureKind::QuadraticBilinear});
    const auto fit = fit_full(bundle, FixedRank{bundle.omega.rows()});
    REQUIRE(fit.Q.has_value());

    // The duplicate Kronecker rows make Q non-unique; its symmetrization and
    // its action on x ⊗ x are identified.
    CHECK(test::rel_error(fit.A, A) < 1e-7);
    Matrix sym_fit = *fit.Q;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = 0; k < n; ++k) {
                sym_fit(i, j * n + k) =
                    0.5 * ((*fit.Q)(i, j * n + k) + (*fit.Q)(i, k * n + j));
            }
        }
    }
    CHECK(test::rel_error(sym_fit, Q0) < 1e-6);
    for (unsigned s = 0; s < 20; ++s) {
        const Vector x = random_vector(n, 100 + s);
        Vector xx(n * n);
        for (Index j = 0; j < n; ++j) {
            xx.segment(j * n, n) = x(j) * x;
        }
        CHECK(((*fit.Q) * xx - Q0 * xx).norm() < 1e-8 * std::max(1.0, (Q0 * xx).norm()));
    }
    // The clipped-rank warning documents the duplicate rows.
    REQUIRE(!fit.warnings.empty());
}

TEST_CASE("least-squares optimality against random perturbations") {
    const Matrix X = random_matrix(3, 40, 50);
    const Matrix Xs = random_matrix(3, 40, 51);
    const RowVector U = white_noise(40, 52);
    const auto bundle = assemble_omega(snapshots_from(X, Xs, U),
                                       ModelStructure{StructureKind::Bilinear});
    const auto fit = fit_full(bundle, FixedRank{bundle.omega.rows()});
    const Matrix G = concat_state_blocks(fit);
    const double base = (bundle.gamma - G * bundle.omega).norm();
    CHECK(base == doctest::Approx(fit.residual).epsilon(1e-12));

    for (unsigned s = 0; s < 100; ++s) {
        Matrix E = random_matrix(G.rows(), G.cols(), 60 + s);
        E *= 1e-3 / E.norm();
        const double perturbed = (bundle.gamma - (G + E) * bundle.omega).norm();
        CHECK(base <= perturbed);
    }
}

TEST_CASE("row-layout integrity: concatenated blocks reproduce G·Omega") {
    const Matrix X = random_matrix(3, 30, 70);
    const Matrix Xs = random_matrix(3, 30, 71);
    const RowVector U = white_noise(30, 72);
    const RowVector Y = white_noise(30, 73);
    const auto bundle =
        assemble_omega(snapshots_from(X, Xs, U, Y),
                       ModelStructure{StructureKind::QuadraticBilinearIO});
    const auto fit = fit_full(bundle, RelativeTolerance{1e-12});

    Matrix G(4, bundle.omega.rows());
    G.topRows(3) = concat_state_blocks(fit);
    Index at = 0;
    G(3, 0) = 0; // filled below
    G.block(3, at, 1, 3) = *fit.C;
    at += 3;
    G(3, at) = *fit.D;
    at += 1;
    G.block(3, at, 1, 3) = *fit.F;
    at += 3;
    G.block(3, at, 1, 9) = *fit.K;

    const double residual = (bundle.gamma - G * bundle.omega).norm();
    CHECK(residual == doctest::Approx(fit.residual).epsilon(1e-12));
}

TEST_CASE("fit rejects an all-zero regressor") {
    const Matrix X = Matrix::Zero(2, 5);
    const auto bundle = assemble_omega(snapshots_from(X, X, RowVector::Zero(5)),
                                       ModelStructure{StructureKind::Linear});
    CHECK_THROWS_AS(fit_full(bundle, RelativeTolerance{1e-10}), NumericalError);
}

TEST_CASE("identity projection returns the full-order blocks exactly") {
    const Index n = 4;
    const auto snap = simulate_bilinear(test::stable_matrix(n, 80, 0.8),
                                        random_matrix(n, 1, 81),
                                        0.2 * random_matrix(n, n, 82),
                                        white_noise(60, 83));
    const auto bundle = assemble_omega(snap, ModelStructure{StructureKind::Bilinear});
    const auto fit = fit_full(bundle, FixedRank{2 * n + 1});

    const DiscreteModel model = project_blocks(fit, Matrix::Identity(n, n), snap.dt);
    CHECK(model.A.dense() == fit.A);
    CHECK(model.B->dense() == *fit.B);
    CHECK(model.N->dense() == *fit.N);
}

TEST_CASE("reduce projects through the dominant Xs basis") {
    const Index n = 5;
    const auto snap = simulate_bilinear(test::stable_matrix(n, 90, 0.9),
                                        random_matrix(n, 1, 91),
                                        0.2 * random_matrix(n, n, 92),
                                        white_noise(120, 93));
    const auto bundle = assemble_omega(snap, ModelStructure{StructureKind::Bilinear});
    const auto fit = fit_full(bundle, FixedRank{2 * n + 1});

    const auto red = reduce(fit, snap.Xs, FixedRank{3}, snap.dt);
    const DiscreteModel& model = red.model;
    CHECK(model.order == 3);
    REQUIRE(model.basis.has_value());
    CHECK(model.basis->rows() == n);

    // The projected blocks agree with directly transforming the fit.
    const Matrix& V = *model.basis;
    CHECK(test::rel_error(model.A.dense(), Matrix(V.transpose() * fit.A * V)) < 1e-13);
    CHECK(test::rel_error(model.N->dense(), Matrix(V.transpose() * *fit.N * V)) < 1e-13);
}

TEST_CASE("reduced quadratic blocks act like the projected coefficients") {
    const Index n = 3;
    const Matrix Q = random_matrix(n, n * n, 95);
    const Matrix V = truncated_svd(random_matrix(n, 8, 96), FixedRank{2}).left_vectors;

    FullOrderBlocks fit;
    fit.structure = ModelStructure{StructureKind::QuadraticBilinear};
    fit.state_dim = n;
    fit.rank_p = n;
    fit.A = random_matrix(n, n, 97);
    fit.B = random_matrix(n, 1, 98);
    fit.N = random_matrix(n, n, 99);
    fit.Q = Q;

    const DiscreteModel model = project_blocks(fit, V, 0.1);
    REQUIRE(model.Q.has_value());
    // Q̃ = V̂ᵀ Q̄ (V̂ ⊗ V̂), checked against the explicit Kronecker factor.
    const Matrix expected = V.transpose() * Q * kron(V, V);
    CHECK(test::rel_error(model.Q->dense(), expected) < 1e-13);
}

TEST_CASE("reduce flags r > p and rejects r > n") {
    const Index n = 4;
    const auto snap = simulate_bilinear(test::stable_matrix(n, 110, 0.8),
                                        random_matrix(n, 1, 111),
                                        0.1 * random_matrix(n, n, 112),
                                        white_noise(80, 113));
    const auto bundle = assemble_omega(snap, ModelStructure{StructureKind::Bilinear});
    const auto fit = fit_full(bundle, FixedRank{2});

    const auto red = reduce(fit, snap.Xs, FixedRank{4}, snap.dt);
    REQUIRE(!red.warnings.empty());
    CHECK(red.warnings[0].find("exceeds the fit truncation") != std::string::npos);

    CHECK_THROWS_AS(reduce(fit, snap.Xs, FixedRank{5}, snap.dt), DimensionError);
}

TEST_CASE("dmd modes of closed-form operators") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = 0.9;
    const auto [values, vectors] = compute_dmd_modes(d);
    CHECK(values(0).real() == doctest::Approx(0.9));
    CHECK(values(1).real() == doctest::Approx(0.5));
    CHECK(std::abs(vectors.col(0).norm() - 1.0) < 1e-12);

    const auto [ones, one_vecs] = compute_dmd_modes(Matrix::Identity(3, 3));
    for (Index i = 0; i < 3; ++i) {
        CHECK(ones(i).real() == doctest::Approx(1.0));
        CHECK(ones(i).imag() == 0.0);
    }

    const double theta = 0.3;
    Matrix rot(2, 2);
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const auto [rot_values, rot_vectors] = compute_dmd_modes(rot);
    CHECK(rot_values(0).real() == doctest::Approx(std::cos(theta)));
    CHECK(rot_values(0).imag() == doctest::Approx(std::sin(theta)));
    CHECK(rot_values(1).imag() == doctest::Approx(-std::sin(theta)));

    // Eigenpair residuals.
    for (Index i = 0; i < 2; ++i) {
        const auto residual =
            (rot.cast<std::complex<double>>() * rot_vectors.col(i) -
             rot_values(i) * rot_vectors.col(i)).norm();
        CHECK(residual < 1e-9);
    }
    CHECK_THROWS_AS(compute_dmd_modes(Matrix::Zero(2, 3)), DimensionError);
}
