/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/kernels.hpp"

namespace sdmd::kernels {

namespace {

void check_nonempty(const Matrix& M, const char* name) {
    if (M.rows() == 0 || M.cols() == 0) {
        throw DimensionError(std::string(name) + ": empty matrix");
    }
}

// Element-level bodies shared by the serial and the parallel drivers. Both
// paths execute the exact same floating-point operations per output slot.

inline void khatri_rao_column(const Matrix& X, Index k, Matrix& out) {
    const Index n = X.rows();
    for (Index i = 0; i < n; ++i) {
        out.col(k).segment(i * n, n) = X(i, k) * X.col(k);
    }
}

inline void kron_block(const Matrix& A, const Matrix& B, Index flat, Matrix& out) {
    const Index i = flat / A.cols();
    const Index j = flat % A.cols();
    out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
}

inline void scaled_column(const Matrix& X, const RowVector& u, Index k, Matrix& out) {
    out.col(k) = u(k) * X.col(k);
}

inline double quadratic_row(const Matrix& Q, const Vector& x, Index i) {
    const Index n = x.size();
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
        const double xj = x(j);
        for (Index k = 0; k < n; ++k) {
            acc += Q(i, j * n + k) * xj * x(k);
        }
    }
    return acc;
}

} // namespace

namespace serial {

Matrix khatri_rao_self(const Matrix& X) {
    check_nonempty(X, "khatri_rao_self");
    Matrix out(X.rows() * X.rows(), X.cols());
    for (Index k = 0; k < X.cols(); ++k) {
        khatri_rao_column(X, k, out);
    }
    return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
    check_nonempty(A, "kron");
    check_nonempty(B, "kron");
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index flat = 0; flat < A.size(); ++flat) {
        kron_block(A, B, flat, out);
    }
    return out;
}

Matrix scale_columns(const Matrix& X, const RowVector& u) {
    check_nonempty(X, "scale_columns");
    if (u.size() != X.cols()) {
        throw DimensionError("scale_columns: scale count does not match column count");
    }
    Matrix out(X.rows(), X.cols());
    for (Index k = 0; k < X.cols(); ++k) {
        scaled_column(X, u, k, out);
    }
    return out;
}

Vector apply_quadratic(const Matrix& Q, const Vector& x) {
    if (Q.cols() != x.size() * x.size()) {
        throw DimensionError("apply_quadratic: Q must have n^2 columns");
    }
    Vector out(Q.rows());
    for (Index i = 0; i < Q.rows(); ++i) {
        out(i) = quadratic_row(Q, x, i);
    }
    return out;
}

} // namespace serial

Matrix khatri_rao_self(const Matrix& X) {
    check_nonempty(X, "khatri_rao_self");
    Matrix out(X.rows() * X.rows(), X.cols());
    const Index m = X.cols();
#pragma omp parallel for schedule(static) if (m > 16)
    for (Index k = 0; k < m; ++k) {
        khatri_rao_column(X, k, out);
    }
    return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
    check_nonempty(A, "kron");
    check_nonempty(B, "kron");
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    const Index total = A.size();
#pragma omp parallel for schedule(static) if (total > 16)
    for (Index flat = 0; flat < total; ++flat) {
        kron_block(A, B, flat, out);
    }
    return out;
}

Matrix scale_columns(const Matrix& X, const RowVector& u) {
    check_nonempty(X, "scale_columns");
    if (u.size() != X.cols()) {
        throw DimensionError("scale_columns: scale count does not match column count");
    }
    Matrix out(X.rows(), X.cols());
    const Index m = X.cols();
#pragma omp parallel for schedule(static) if (m > 64)
    for (Index k = 0; k < m; ++k) {
        scaled_column(X, u, k, out);
    }
    return out;
}

Vector apply_quadratic(const Matrix& Q, const Vector& x) {
    if (Q.cols() != x.size() * x.size()) {
        throw DimensionError("apply_quadratic: Q must have n^2 columns");
    }
    Vector out(Q.rows());
    const Index rows = Q.rows();
#pragma omp parallel for schedule(static) if (rows > 32)
    for (Index i = 0; i < rows; ++i) {
        out(i) = quadratic_row(Q, x, i);
    }
    return out;
}

} // namespace sdmd::kernels
