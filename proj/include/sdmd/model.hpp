/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/structure.hpp"
#include "sdmd/types.hpp"

#include <optional>
#include <string>
#include <variant>

namespace sdmd {

/// One system matrix, stored dense or sparse. Large lifted systems keep their
/// operators sparse; fitted and reduced models are dense.
class Block {
public:
    Block() : data_(Matrix()) {}
    explicit Block(Matrix m) : data_(std::move(m)) {}
    explicit Block(SparseMatrix m) : data_(std::move(m)) { sparse().makeCompressed(); }

    bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }
    Index rows() const;
    Index cols() const;

    const Matrix& dense() const;
    const SparseMatrix& sparse() const;
    SparseMatrix& sparse();
    Matrix to_dense() const;

    /// 1×1 blocks only.
    double scalar() const;

    /// M · x
    Vector apply(const Vector& x) const;

    /// M · (x ⊗ x) for an n × n² block; the Kronecker square is never stored
    /// for sparse blocks and only as a length-n² vector for dense ones.
    Vector apply_quadratic(const Vector& x) const;

private:
    std::variant<Matrix, SparseMatrix> data_;
};

/// scale·M + diag·I, preserving the storage kind. Square blocks only when
/// diag != 0.
Block scale_add_identity(const Block& M, double scale, double diag);

struct DiscreteModel {
    ModelStructure structure;
    Index order = 0; // state dimension n
    double dt = 0.0;
    Block A;                 // n × n
    std::optional<Block> B;  // n × 1
    std::optional<Block> N;  // n × n
    std::optional<Block> Q;  // n × n²
    std::optional<Block> C;  // 1 × n
    std::optional<Block> D;  // 1 × 1
    std::optional<Block> F;  // 1 × n
    std::optional<Block> K;  // 1 × n²
    std::optional<Matrix> basis; // n_full × n projection, when reduced
};

struct ContinuousModel {
    ModelStructure structure;
    Index order = 0;
    Block A;
    std::optional<Block> B;
    std::optional<Block> N;
    std::optional<Block> Q;
    std::optional<Block> C;
    std::optional<Block> D;
    std::optional<Block> F;
    std::optional<Block> K;
    std::optional<Matrix> basis;
};

/// Checks block presence and shapes against the structure tag.
void validate(const DiscreteModel& model);
void validate(const ContinuousModel& model);

struct SimulationResult {
    Matrix states; // n × (m+1)
    std::optional<RowVector> outputs; // 1 × m, present when the model has C
};

/// Steps x_{k+1} = A x_k + Q(x_k⊗x_k) + N x_k u_k + B u_k, with absent blocks
/// treated as zero, and records y_k = C x_k + K(x_k⊗x_k) + F x_k u_k + D u_k
/// when output blocks exist. Throws DivergenceError (with the step index) as
/// soon as a non-finite state or output appears.
SimulationResult simulate_discrete(const DiscreteModel& model, const RowVector& u,
                                   const Vector& x0);

/// Â = (Ã−I)/dt, B̂ = B̃/dt, N̂ = Ñ/dt, Q̂ = Q̃/dt; output blocks are copied
/// (feed-through terms agree between the representations).
ContinuousModel discrete_to_continuous(const DiscreteModel& model);

/// Ã = I + dt·Â, B̃ = dt·B̂, Ñ = dt·N̂, Q̃ = dt·Q̂; output blocks copied.
/// Exact inverse of discrete_to_continuous up to one rounding each way.
DiscreteModel continuous_to_discrete(const ContinuousModel& model, double dt);

/// ‖y_ref − y_test‖₂ / ‖y_ref‖₂. Throws NumericalError for a zero reference.
double relative_output_error(const RowVector& y_ref, const RowVector& y_test);

/// Pointwise |y_ref − y_test| series, for CSV plotting.
RowVector absolute_error_series(const RowVector& y_ref, const RowVector& y_test);

/// Plain-text model persistence. A header (kind, structure, order, dt)
/// followed by labeled blocks, dense ones in row-major decimal and sparse
/// ones as coordinate triplets, all with 17 significant digits so that
/// load(save(M)) == M.
void save_model(const DiscreteModel& model, const std::string& path);
void save_model(const ContinuousModel& model, const std::string& path);

using AnyModel = std::variant<DiscreteModel, ContinuousModel>;
AnyModel load_model(const std::string& path);
DiscreteModel load_discrete_model(const std::string& path);
ContinuousModel load_continuous_model(const std::string& path);

} // namespace sdmd
