/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/systems.hpp"

#include <cmath>
#include <vector>

namespace sdmd {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_entry(Triplets& trips, Index i, Index j, double v) {
    trips.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
}

// Adds the coefficient of v_i·v_j to row k of the quadratic block, splitting
// it evenly over the (i,j) and (j,i) Kronecker slots so the stored Q equals
// its own symmetrization.
void add_quadratic(Triplets& trips, Index n, Index k, Index i, Index j, double coeff) {
    if (i == j) {
        add_entry(trips, k, i * n + j, coeff);
    } else {
        add_entry(trips, k, i * n + j, coeff / 2.0);
        add_entry(trips, k, j * n + i, coeff / 2.0);
    }
}

// Appends scale·(M ⊗ I_n + I_n ⊗ M) of a small dense block M into the lifted
// triplet list at row/column offsets, for M of shape p × q acting on length-q
// factors (the identity factor contributes the index shift).
void add_kron_identity_pair(Triplets& trips, const Matrix& M, Index n, Index row_off,
                            Index col_off) {
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            const double v = M(i, j);
            if (v == 0.0) {
                continue;
            }
            for (Index k = 0; k < n; ++k) {
                // M ⊗ I
                add_entry(trips, row_off + i * n + k, col_off + j * n + k, v);
                // I ⊗ M
                add_entry(trips, row_off + k * M.rows() + i, col_off + k * M.cols() + j,
                          v);
            }
        }
    }
}

} // namespace

ContinuousModel build_burgers_quadratic(const BurgersConfig& cfg) {
    const Index n = cfg.n0;
    if (n < 2) {
        throw DimensionError("burgers: need at least two grid points");
    }
    if (!(cfg.nu > 0.0) || !(cfg.length > 0.0)) {
        throw DimensionError("burgers: viscosity and length must be positive");
    }
    Index output_index = cfg.output_index;
    if (output_index == 0) {
        output_index = (n + 1) / 2; // ceil(n0/2)
    }
    if (output_index < 1 || output_index > n) {
        throw DimensionError("burgers: output index out of range");
    }

    const double h = cfg.length / static_cast<double>(n + 1);
    const double diff = cfg.nu / (h * h); // diffusion weight ν/h²
    const double conv = 1.0 / (2.0 * h);  // convection weight 1/(2h)

    Matrix A = Matrix::Zero(n, n);
    A(0, 0) = -2.0 * diff;
    A(0, 1) = diff;
    for (Index k = 1; k < n - 1; ++k) {
        A(k, k - 1) = diff;
        A(k, k) = -2.0 * diff;
        A(k, k + 1) = diff;
    }
    A(n - 1, n - 2) = 2.0 * diff;
    A(n - 1, n - 1) = -2.0 * diff;

    Triplets q_trips;
    // Row 1 (index 0): −v₁v₂/(2h).
    add_quadratic(q_trips, n, 0, 0, 1, -conv);
    // Interior rows: −v_k(v_{k+1} − v_{k−1})/(2h).
    for (Index k = 1; k < n - 1; ++k) {
        add_quadratic(q_trips, n, k, k, k + 1, -conv);
        add_quadratic(q_trips, n, k, k, k - 1, conv);
    }
    // Last row: −v_n v_{n−1}/(2h).
    add_quadratic(q_trips, n, n - 1, n - 1, n - 2, -conv);
    SparseMatrix Q(n, n * n);
    Q.setFromTriplets(q_trips.begin(), q_trips.end());

    Matrix N = Matrix::Zero(n, n);
    N(0, 0) = conv;

    Matrix B = Matrix::Zero(n, 1);
    B(0, 0) = diff;

    Matrix C = Matrix::Zero(1, n);
    C(0, output_index - 1) = 1.0;

    ContinuousModel model;
    model.structure = ModelStructure{StructureKind::QuadraticBilinearIO};
    model.order = n;
    model.A = Block(std::move(A));
    model.B = Block(std::move(B));
    model.N = Block(std::move(N));
    model.Q = Block(std::move(Q));
    model.C = Block(std::move(C));
    validate(model);
    return model;
}

ContinuousModel carleman_bilinearize(const ContinuousModel& qb) {
    validate(qb);
    if (!qb.structure.has_quadratic() || !qb.B || !qb.N || !qb.Q) {
        throw DimensionError("carleman_bilinearize: expected a quadratic-bilinear "
                             "model with B, N and Q present");
    }
    const Index n0 = qb.order;
    const Index n = n0 * n0 + n0;

    const Matrix A1 = qb.A.to_dense();
    const Matrix N1 = qb.N->to_dense();
    const Matrix B1 = qb.B->to_dense();

    // A = [[A1, Q1], [0, A1⊗I + I⊗A1]]
    Triplets a_trips;
    for (Index i = 0; i < n0; ++i) {
        for (Index j = 0; j < n0; ++j) {
            if (A1(i, j) != 0.0) {
                add_entry(a_trips, i, j, A1(i, j));
            }
        }
    }
    if (qb.Q->is_sparse()) {
        const SparseMatrix& Q1 = qb.Q->sparse();
        for (Index outer = 0; outer < Q1.outerSize(); ++outer) {
            for (SparseMatrix::InnerIterator it(Q1, outer); it; ++it) {
                add_entry(a_trips, it.row(), n0 + it.col(), it.value());
            }
        }
    } else {
        const Matrix& Q1 = qb.Q->dense();
        for (Index i = 0; i < Q1.rows(); ++i) {
            for (Index j = 0; j < Q1.cols(); ++j) {
                if (Q1(i, j) != 0.0) {
                    add_entry(a_trips, i, n0 + j, Q1(i, j));
                }
            }
        }
    }
    add_kron_identity_pair(a_trips, A1, n0, n0, n0);
    SparseMatrix A(n, n);
    A.setFromTriplets(a_trips.begin(), a_trips.end());

    // N = [[N1, 0], [B1⊗I + I⊗B1, N1⊗I + I⊗N1]]
    Triplets n_trips;
    for (Index i = 0; i < n0; ++i) {
        for (Index j = 0; j < n0; ++j) {
            if (N1(i, j) != 0.0) {
                add_entry(n_trips, i, j, N1(i, j));
            }
        }
    }
    add_kron_identity_pair(n_trips, B1, n0, n0, 0);
    add_kron_identity_pair(n_trips, N1, n0, n0, n0);
    SparseMatrix N(n, n);
    N.setFromTriplets(n_trips.begin(), n_trips.end());

    Matrix B = Matrix::Zero(n, 1);
    B.topRows(n0) = B1;

    ContinuousModel lifted;
    lifted.structure = ModelStructure{
        qb.structure.has_output() ? StructureKind::BilinearIO : StructureKind::Bilinear};
    lifted.order = n;
    lifted.A = Block(std::move(A));
    lifted.N = Block(std::move(N));
    lifted.B = Block(std::move(B));
    if (qb.C) {
        Matrix C = Matrix::Zero(1, n);
        C.leftCols(n0) = qb.C->to_dense();
        lifted.C = Block(std::move(C));
    }
    validate(lifted);
    return lifted;
}

Vector vdp_rhs(const VdpConfig& cfg, const Vector& x, double u) {
    if (x.size() != 6) {
        throw DimensionError("vdp_rhs: state must have length 6");
    }
    const double mu = cfg.mu;
    const double a = cfg.a;
    const double b = cfg.b;

    Vector dx(6);
    dx(0) = x(1);
    dx(1) = -x(0) - mu * (x(0) * x(0) - 1.0) * x(1) + a * (x(2) - x(0)) +
            b * (x(3) - x(1));
    dx(2) = x(3);
    dx(3) = -x(2) - mu * (x(2) * x(2) - 1.0) * x(3) + a * (x(0) - x(2)) +
            b * (x(1) - x(3)) + a * (x(4) - x(2)) + b * (x(5) - x(3)) + u;
    dx(4) = x(5);
    dx(5) = -x(4) - mu * (x(4) * x(4) - 1.0) * x(5) + a * (x(2) - x(4)) +
            b * (x(3) - x(5));
    return dx;
}

RowVector vdp_output_row() {
    RowVector c = RowVector::Zero(6);
    c(2) = 1.0;
    return c;
}

VdpSimulation simulate_vdp(const VdpConfig& cfg, const RowVector& u, double dt,
                           const Vector& x0) {
    if (x0.size() != 6) {
        throw DimensionError("simulate_vdp: x0 must have length 6");
    }
    if (!(dt > 0.0)) {
        throw DimensionError("simulate_vdp: dt must be positive");
    }
    const Index m = u.size();

    VdpSimulation sim;
    sim.states.resize(6, m + 1);
    sim.states.col(0) = x0;
    sim.outputs.resize(m);

    Vector x = x0;
    for (Index k = 0; k < m; ++k) {
        sim.outputs(k) = x(2);
        Vector next = x + dt * vdp_rhs(cfg, x, u(k));
        if (!next.allFinite()) {
            throw DivergenceError(k + 1);
        }
        sim.states.col(k + 1) = next;
        x = std::move(next);
    }
    return sim;
}

} // namespace sdmd
