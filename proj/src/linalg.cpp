/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/linalg.hpp"

#include "sdmd/kernels.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdmd {

namespace {

// Numerical-rank guard: singular values at or below this are treated as zero.
double rank_guard(double sigma_max, Index rows, Index cols) {
    return sigma_max * static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon();
}

// Flips the pair (u_k, w_k) so the first nonzero entry of u_k is non-negative.
// "Nonzero" is judged against the largest entry of the column, which keeps the
// rule stable under rounding noise in entries that are analytically zero.
void fix_signs(Matrix& U, Matrix& W) {
    for (Index c = 0; c < U.cols(); ++c) {
        const double scale = U.col(c).cwiseAbs().maxCoeff();
        const double cutoff = 1e-12 * scale;
        for (Index i = 0; i < U.rows(); ++i) {
            const double v = U(i, c);
            if (std::abs(v) > cutoff) {
                if (v < 0.0) {
                    U.col(c) = -U.col(c);
                    W.col(c) = -W.col(c);
                }
                break;
            }
        }
    }
}

} // namespace

void validate(const TruncationPolicy& policy) {
    if (const auto* fixed = std::get_if<FixedRank>(&policy)) {
        if (fixed->rank < 1) {
            throw PolicyError("FixedRank: rank must be positive");
        }
    } else {
        const double tau = std::get<RelativeTolerance>(policy).tau;
        if (!(tau > 0.0) || !(tau < 1.0)) {
            throw PolicyError("RelativeTolerance: tau must lie in (0,1)");
        }
    }
}

SvdFactors truncated_svd(const Matrix& M, const TruncationPolicy& policy) {
    if (M.rows() == 0 || M.cols() == 0) {
        throw DimensionError("truncated_svd: empty matrix");
    }
    validate(policy);

    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;

    const double guard = rank_guard(sigma_max, M.rows(), M.cols());
    Index nonzero = 0;
    while (nonzero < sigma.size() && sigma(nonzero) > guard) {
        ++nonzero;
    }

    Index k = 0;
    if (const auto* fixed = std::get_if<FixedRank>(&policy)) {
        k = std::min(fixed->rank, nonzero);
    } else {
        const double tau = std::get<RelativeTolerance>(policy).tau;
        while (k < sigma.size() && sigma_max > 0.0 && sigma(k) / sigma_max > tau) {
            ++k;
        }
    }
    if (k == 0) {
        throw NumericalError("truncated_svd: no singular value survives the cut "
                             "(matrix is numerically zero)");
    }

    SvdFactors out;
    out.left_vectors = svd.matrixU().leftCols(k);
    out.singular_values = sigma.head(k);
    out.right_vectors = svd.matrixV().leftCols(k);
    out.truncation_rank = k;
    out.spectrum = sigma;
    fix_signs(out.left_vectors, out.right_vectors);
    return out;
}

Vector singular_spectrum(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0) {
        throw DimensionError("singular_spectrum: empty matrix");
    }
    Eigen::BDCSVD<Matrix> svd(M);
    return svd.singularValues();
}

Matrix pinv_apply(const SvdFactors& factors, const Matrix& target) {
    if (target.cols() != factors.right_vectors.rows()) {
        throw DimensionError("pinv_apply: target has " +
                             std::to_string(target.cols()) +
                             " columns, factors expect " +
                             std::to_string(factors.right_vectors.rows()));
    }
    Matrix core = target * factors.right_vectors; // g × k
    core.array().rowwise() /= factors.singular_values.transpose().array();
    return core * factors.left_vectors.transpose();
}

Matrix kron(const Matrix& A, const Matrix& B) {
    return kernels::kron(A, B);
}

Matrix khatri_rao_self(const Matrix& X) {
    return kernels::khatri_rao_self(X);
}

} // namespace sdmd
