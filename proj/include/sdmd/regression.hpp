/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/linalg.hpp"
#include "sdmd/model.hpp"
#include "sdmd/snapshots.hpp"
#include "sdmd/structure.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace sdmd {

enum class RegressorBlockKind { State, Input, BilinearZ, QuadraticT };

struct RowRange {
    RegressorBlockKind block;
    Index begin = 0; // first row
    Index end = 0;   // one past the last row
};

/// The (Γ, Ω) pair for one structured least-squares fit, with the row ranges
/// needed to split the solution back into blocks. Ω rows are stacked in the
/// fixed order [X; U; X·diag(u); T], matching the block column order
/// [A B N Q] of the recovered system matrix.
struct RegressorBundle {
    Matrix gamma;
    Matrix omega;
    std::vector<RowRange> row_layout;
    ModelStructure structure;
    Index state_dim = 0;
};

/// Builds Ω (and Γ) from a snapshot set. The diagonal input factor is applied
/// as a column-wise scaling and the quadratic rows come from the column-wise
/// Kronecker square, so no m×m or n²×m² intermediate is ever formed.
RegressorBundle assemble_omega(const SnapshotSet& snap, const ModelStructure& structure);

/// Xs for state-only structures, [Xs; Y] for input-output structures.
Matrix assemble_gamma(const SnapshotSet& snap, const ModelStructure& structure);

/// Full-order blocks recovered from the least-squares solution G = Γ·Ω†.
struct FullOrderBlocks {
    ModelStructure structure;
    Index state_dim = 0;
    Matrix A;
    std::optional<Matrix> B; // n × 1
    std::optional<Matrix> N;
    std::optional<Matrix> Q; // n × n²
    std::optional<RowVector> C;
    std::optional<double> D;
    std::optional<RowVector> F;
    std::optional<RowVector> K; // 1 × n²
    double residual = 0.0; // ‖Γ − G·Ω‖_F
    Index rank_p = 0;      // SVD truncation used for the pseudoinverse
    Vector omega_spectrum; // full σ(Ω), for reports
    std::vector<std::string> warnings;
};

/// Minimizes ‖Γ − G·Ω‖_F through the truncated-SVD pseudoinverse of Ω and
/// splits G into blocks along the bundle's row layout. A fixed rank beyond
/// the numerical rank of Ω is clipped with a warning; a numerically zero Ω
/// raises NumericalError.
FullOrderBlocks fit_full(const RegressorBundle& bundle, const TruncationPolicy& policy_p);

struct Reduction {
    DiscreteModel model;
    std::vector<std::string> warnings;
};

/// Projects the full-order blocks onto the leading left singular basis V̂ of
/// Xs: Ã = V̂ᵀĀV̂, B̃ = V̂ᵀB̄, Ñ = V̂ᵀN̄V̂, Q̃ = V̂ᵀQ̄(V̂⊗V̂), C̃ = C̄V̂,
/// D̃ = D̄, F̃ = F̄V̂, K̃ = K̄(V̂⊗V̂). The basis is stored on the model.
/// Requesting a fixed rank above the state dimension is an error; a rank
/// above the fit's truncation order only warns.
Reduction reduce(const FullOrderBlocks& blocks, const Matrix& Xs,
                 const TruncationPolicy& policy_r, double dt);

/// The projection core of reduce() for a caller-supplied orthonormal basis.
DiscreteModel project_blocks(const FullOrderBlocks& blocks, const Matrix& basis,
                             double dt);

/// Full-order blocks as a simulatable discrete model (identity basis).
DiscreteModel to_discrete_model(const FullOrderBlocks& blocks, double dt);

/// Eigenpairs of the fitted state operator, sorted by |λ| (descending, ties
/// by real then imaginary part), conjugate pairs adjacent with the positive
/// imaginary part first.
std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> compute_dmd_modes(const Matrix& A);

} // namespace sdmd
