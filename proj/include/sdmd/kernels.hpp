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

namespace sdmd::kernels {

/// Serial reference implementations. These are the ground truth the parallel
/// kernels are compared against; tests require bitwise-identical results.
namespace serial {

Matrix khatri_rao_self(const Matrix& X);
Matrix kron(const Matrix& A, const Matrix& B);
Matrix scale_columns(const Matrix& X, const RowVector& u);
Vector apply_quadratic(const Matrix& Q, const Vector& x);

} // namespace serial

// OpenMP-parallel kernels. Every output column (or row) is produced by exactly
// one thread running the same element-level code as the serial reference, so
// results are bitwise identical for any thread count.

/// Column-wise self Kronecker product: column k of the result is x_k ⊗ x_k.
/// The n² × m² product X ⊗ X is never formed.
Matrix khatri_rao_self(const Matrix& X);

/// Standard Kronecker product, shape (rA·rB) × (cA·cB).
Matrix kron(const Matrix& A, const Matrix& B);

/// Scales column k of X by u(k). Equivalent to X · diag(u) without the m × m
/// diagonal factor.
Matrix scale_columns(const Matrix& X, const RowVector& u);

/// Applies an n × n² quadratic coefficient matrix: returns Q · (x ⊗ x),
/// accumulated row-wise so only the length-n input is held.
Vector apply_quadratic(const Matrix& Q, const Vector& x);

} // namespace sdmd::kernels
