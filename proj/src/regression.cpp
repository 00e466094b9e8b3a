/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/regression.hpp"

#include "sdmd/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace sdmd {

namespace {

void check_snapshots(const SnapshotSet& snap, const ModelStructure& structure) {
    if (snap.sample_count() < 1) {
        throw DimensionError("assemble: need at least one snapshot");
    }
    if (snap.X.rows() != snap.Xs.rows() || snap.X.cols() != snap.Xs.cols()) {
        throw DimensionError("assemble: X and Xs must share shape");
    }
    if (snap.U.size() != snap.sample_count()) {
        throw DimensionError("assemble: U length must match snapshot count");
    }
    if (structure.has_output()) {
        if (!snap.Y) {
            throw DimensionError("assemble: structure needs outputs but Y is absent");
        }
        if (snap.Y->size() != snap.sample_count()) {
            throw DimensionError("assemble: Y length must match snapshot count");
        }
    }
}

} // namespace

RegressorBundle assemble_omega(const SnapshotSet& snap, const ModelStructure& structure) {
    check_snapshots(snap, structure);
    const Index n = snap.state_dim();
    const Index m = snap.sample_count();

    RegressorBundle bundle;
    bundle.structure = structure;
    bundle.state_dim = n;
    bundle.omega.resize(structure.regressor_rows(n), m);

    Index row = 0;
    bundle.omega.middleRows(row, n) = snap.X;
    bundle.row_layout.push_back({RegressorBlockKind::State, row, row + n});
    row += n;

    if (structure.has_input()) {
        bundle.omega.middleRows(row, 1) = snap.U;
        bundle.row_layout.push_back({RegressorBlockKind::Input, row, row + 1});
        row += 1;
    }
    if (structure.has_bilinear()) {
        bundle.omega.middleRows(row, n) = kernels::scale_columns(snap.X, snap.U);
        bundle.row_layout.push_back({RegressorBlockKind::BilinearZ, row, row + n});
        row += n;
    }
    if (structure.has_quadratic()) {
        bundle.omega.middleRows(row, n * n) = kernels::khatri_rao_self(snap.X);
        bundle.row_layout.push_back({RegressorBlockKind::QuadraticT, row, row + n * n});
        row += n * n;
    }

    bundle.gamma = assemble_gamma(snap, structure);
    return bundle;
}

Matrix assemble_gamma(const SnapshotSet& snap, const ModelStructure& structure) {
    check_snapshots(snap, structure);
    if (!structure.has_output()) {
        return snap.Xs;
    }
    Matrix gamma(snap.state_dim() + 1, snap.sample_count());
    gamma.topRows(snap.state_dim()) = snap.Xs;
    gamma.bottomRows(1) = *snap.Y;
    return gamma;
}

FullOrderBlocks fit_full(const RegressorBundle& bundle, const TruncationPolicy& policy_p) {
    const Index n = bundle.state_dim;
    if (bundle.omega.rows() != bundle.structure.regressor_rows(n) ||
        bundle.omega.cols() != bundle.gamma.cols()) {
        throw DimensionError("fit_full: inconsistent bundle");
    }

    FullOrderBlocks fit;
    fit.structure = bundle.structure;
    fit.state_dim = n;

    SvdFactors factors;
    try {
        factors = truncated_svd(bundle.omega, policy_p);
    } catch (const NumericalError&) {
        throw NumericalError("fit_full: regressor matrix is numerically zero");
    }
    fit.rank_p = factors.truncation_rank;
    fit.omega_spectrum = factors.spectrum;
    if (const auto* fixed = std::get_if<FixedRank>(&policy_p)) {
        if (fixed->rank > factors.truncation_rank) {
            fit.warnings.push_back(
                "fit_full: requested rank " + std::to_string(fixed->rank) +
                " exceeds the numerical rank; clipped to " +
                std::to_string(factors.truncation_rank));
        }
    }

    Matrix G = pinv_apply(factors, bundle.gamma);

    const bool io = bundle.structure.has_output();
    // With the quadratic output term switched off, the output row is refit
    // against the regressor without its quadratic rows and carries no K block.
    const bool restricted_output = io && bundle.structure.has_quadratic() &&
                                   !bundle.structure.has_quadratic_output();
    if (restricted_output) {
        const Index quad_begin = bundle.row_layout.back().begin;
        const SvdFactors out_factors =
            truncated_svd(bundle.omega.topRows(quad_begin), policy_p);
        G.row(n).head(quad_begin) =
            pinv_apply(out_factors, bundle.gamma.bottomRows(1));
        G.row(n).tail(G.cols() - quad_begin).setZero();
    }
    fit.residual = (bundle.gamma - G * bundle.omega).norm();
    const auto state_part = [&](const RowRange& range) {
        return G.block(0, range.begin, n, range.end - range.begin);
    };
    for (const RowRange& range : bundle.row_layout) {
        switch (range.block) {
        case RegressorBlockKind::State:
            fit.A = state_part(range);
            if (io) {
                fit.C = G.block(n, range.begin, 1, range.end - range.begin);
            }
            break;
        case RegressorBlockKind::Input:
            fit.B = state_part(range);
            if (io) {
                fit.D = G(n, range.begin);
            }
            break;
        case RegressorBlockKind::BilinearZ:
            fit.N = state_part(range);
            if (io) {
                fit.F = G.block(n, range.begin, 1, range.end - range.begin);
            }
            break;
        case RegressorBlockKind::QuadraticT:
            fit.Q = state_part(range);
            if (io && bundle.structure.has_quadratic_output()) {
                fit.K = G.block(n, range.begin, 1, range.end - range.begin);
            }
            break;
        }
    }
    return fit;
}

namespace {

// Right-multiplies an n × n² coefficient matrix by V̂ ⊗ V̂ and, when `left`
// is set, projects the rows too. Works row by row through the n × n reshape
// of each coefficient row, so the n² × r² Kronecker factor is never formed.
Matrix project_quadratic(const Matrix& coeffs, const Matrix& basis, bool left) {
    const Index n = basis.rows();
    const Index r = basis.cols();
    Matrix scaled(coeffs.rows(), r * r);
    for (Index i = 0; i < coeffs.rows(); ++i) {
        Matrix reshaped(n, n);
        for (Index j = 0; j < n; ++j) {
            reshaped.row(j) = coeffs.block(i, j * n, 1, n);
        }
        const Matrix projected = basis.transpose() * reshaped * basis; // r × r
        for (Index a = 0; a < r; ++a) {
            scaled.block(i, a * r, 1, r) = projected.row(a);
        }
    }
    if (!left) {
        return scaled;
    }
    return basis.transpose() * scaled;
}

} // namespace

DiscreteModel project_blocks(const FullOrderBlocks& blocks, const Matrix& basis,
                             double dt) {
    if (basis.rows() != blocks.state_dim) {
        throw DimensionError("project_blocks: basis rows must match the state dimension");
    }

    DiscreteModel model;
    model.structure = blocks.structure;
    model.order = basis.cols();
    model.dt = dt;
    model.A = Block(Matrix(basis.transpose() * blocks.A * basis));
    if (blocks.B) {
        model.B = Block(Matrix(basis.transpose() * *blocks.B));
    }
    if (blocks.N) {
        model.N = Block(Matrix(basis.transpose() * *blocks.N * basis));
    }
    if (blocks.Q) {
        model.Q = Block(project_quadratic(*blocks.Q, basis, true));
    }
    if (blocks.C) {
        model.C = Block(Matrix(*blocks.C * basis));
    }
    if (blocks.D) {
        model.D = Block(Matrix::Constant(1, 1, *blocks.D));
    }
    if (blocks.F) {
        model.F = Block(Matrix(*blocks.F * basis));
    }
    if (blocks.K) {
        model.K = Block(project_quadratic(*blocks.K, basis, false));
    }
    model.basis = basis;
    validate(model);
    return model;
}

Reduction reduce(const FullOrderBlocks& blocks, const Matrix& Xs,
                 const TruncationPolicy& policy_r, double dt) {
    if (Xs.rows() != blocks.state_dim) {
        throw DimensionError("reduce: Xs row count must match the state dimension");
    }
    if (const auto* fixed = std::get_if<FixedRank>(&policy_r)) {
        if (fixed->rank > blocks.state_dim) {
            throw DimensionError("reduce: requested order exceeds the state dimension");
        }
    }

    const SvdFactors factors = truncated_svd(Xs, policy_r);

    Reduction result;
    if (factors.truncation_rank > blocks.rank_p) {
        result.warnings.push_back(
            "reduce: order r = " + std::to_string(factors.truncation_rank) +
            " exceeds the fit truncation p = " + std::to_string(blocks.rank_p));
    }
    result.model = project_blocks(blocks, factors.left_vectors, dt);
    return result;
}

DiscreteModel to_discrete_model(const FullOrderBlocks& blocks, double dt) {
    DiscreteModel model;
    model.structure = blocks.structure;
    model.order = blocks.state_dim;
    model.dt = dt;
    model.A = Block(blocks.A);
    if (blocks.B) {
        model.B = Block(*blocks.B);
    }
    if (blocks.N) {
        model.N = Block(*blocks.N);
    }
    if (blocks.Q) {
        model.Q = Block(*blocks.Q);
    }
    if (blocks.C) {
        model.C = Block(Matrix(*blocks.C));
    }
    if (blocks.D) {
        model.D = Block(Matrix::Constant(1, 1, *blocks.D));
    }
    if (blocks.F) {
        model.F = Block(Matrix(*blocks.F));
    }
    if (blocks.K) {
        model.K = Block(Matrix(*blocks.K));
    }
    validate(model);
    return model;
}

std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> compute_dmd_modes(const Matrix& A) {
    if (A.rows() != A.cols()) {
        throw DimensionError("compute_dmd_modes: matrix must be square");
    }
    Eigen::EigenSolver<Matrix> solver(A);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("compute_dmd_modes: eigendecomposition failed");
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();

    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double ma = std::abs(values(a));
        const double mb = std::abs(values(b));
        if (ma != mb) {
            return ma > mb;
        }
        if (values(a).real() != values(b).real()) {
            return values(a).real() > values(b).real();
        }
        return values(a).imag() > values(b).imag();
    });

    Eigen::VectorXcd sorted_values(values.size());
    Eigen::MatrixXcd sorted_vectors(vectors.rows(), vectors.cols());
    for (Index i = 0; i < values.size(); ++i) {
        sorted_values(i) = values(order[static_cast<std::size_t>(i)]);
        sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    return {sorted_values, sorted_vectors};
}

} // namespace sdmd
