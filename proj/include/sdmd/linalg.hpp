/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/types.hpp"

#include <variant>

namespace sdmd {

/// Keep the leading r singular triplets (clipped to the numerical rank).
struct FixedRank {
    Index rank = 1;
};

/// Keep the singular values with sigma_i / sigma_1 > tau, tau in (0,1).
/// The comparison is strict; boundary values are dropped.
struct RelativeTolerance {
    double tau = 1e-12;
};

using TruncationPolicy = std::variant<FixedRank, RelativeTolerance>;

/// Throws PolicyError when the policy parameters are out of range.
void validate(const TruncationPolicy& policy);

/// Truncated singular value decomposition M ≈ U · diag(sigma) · V^T.
struct SvdFactors {
    Matrix left_vectors;       // rows × k, orthonormal columns
    Vector singular_values;    // length k, non-increasing, all > 0
    Matrix right_vectors;      // cols × k, orthonormal columns
    Index truncation_rank = 0; // k

    // Untruncated spectrum, length min(rows, cols). Kept for reporting.
    Vector spectrum;
};

/// Computes the SVD of M and truncates it under `policy`.
///
/// Deterministic for a fixed input: the sign of each singular pair is fixed so
/// that the first nonzero entry of the left vector is non-negative.
/// Throws DimensionError for an empty input, PolicyError for a bad policy and
/// NumericalError when no singular value survives the cut (zero matrix).
SvdFactors truncated_svd(const Matrix& M, const TruncationPolicy& policy);

/// Full singular spectrum of M, non-increasing. No vectors are formed.
Vector singular_spectrum(const Matrix& M);

/// Returns target · W · diag(1/sigma) · V^T, i.e. target times the
/// pseudoinverse described by `factors`. The pseudoinverse itself is never
/// materialized.
Matrix pinv_apply(const SvdFactors& factors, const Matrix& target);

/// Kronecker product (parallel kernel behind the scenes).
Matrix kron(const Matrix& A, const Matrix& B);

/// Column-wise self Kronecker product; column k equals x_k ⊗ x_k.
Matrix khatri_rao_self(const Matrix& X);

} // namespace sdmd
