/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

// Times the OpenMP kernels against their serial reference implementations
// and prints one table row per kernel/size. Checksum columns must agree; the
// parallel kernels are bitwise-equal to the reference by construction.

#include "sdmd/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

namespace {

using sdmd::Index;
using sdmd::Matrix;
using sdmd::RowVector;
using sdmd::Vector;

Matrix random_matrix(Index rows, Index cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix M(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            M(i, j) = dist(rng);
        }
    }
    return M;
}

double time_ms(const std::function<double()>& body, int reps, double* checksum) {
    using clock = std::chrono::steady_clock;
    *checksum = body(); // warm-up, also records the checksum
    const auto start = clock::now();
    for (int r = 0; r < reps; ++r) {
        *checksum = body();
    }
    const auto stop = clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, const char* size, int reps,
            const std::function<double()>& serial_body,
            const std::function<double()>& parallel_body) {
    double serial_sum = 0.0;
    double parallel_sum = 0.0;
    const double t_serial = time_ms(serial_body, reps, &serial_sum);
    const double t_parallel = time_ms(parallel_body, reps, &parallel_sum);
    std::printf("%-18s %-14s %10.3f %10.3f %8.2fx  %s\n", name, size, t_serial,
                t_parallel, t_serial / t_parallel,
                serial_sum == parallel_sum ? "ok" : "MISMATCH");
}

} // namespace

int main() {
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("kernel benchmark, %d thread(s)\n", threads);
    std::printf("%-18s %-14s %10s %10s %9s\n", "kernel", "size", "serial/ms",
                "openmp/ms", "speedup");

    {
        const Matrix X = random_matrix(120, 4000, 1);
        report(
            "khatri_rao_self", "120x4000", 5,
            [&] { return sdmd::kernels::serial::khatri_rao_self(X).sum(); },
            [&] { return sdmd::kernels::khatri_rao_self(X).sum(); });
    }
    {
        const Matrix A = random_matrix(80, 80, 2);
        const Matrix B = random_matrix(40, 40, 3);
        report(
            "kron", "80x80 x 40x40", 5,
            [&] { return sdmd::kernels::serial::kron(A, B).sum(); },
            [&] { return sdmd::kernels::kron(A, B).sum(); });
    }
    {
        const Matrix X = random_matrix(1640, 10000, 4);
        const RowVector u = random_matrix(1, 10000, 5);
        report(
            "scale_columns", "1640x10000", 5,
            [&] { return sdmd::kernels::serial::scale_columns(X, u).sum(); },
            [&] { return sdmd::kernels::scale_columns(X, u).sum(); });
    }
    {
        const Index n = 64;
        const Matrix Q = random_matrix(n, n * n, 6);
        const Vector x = random_matrix(n, 1, 7);
        report(
            "apply_quadratic", "64x4096", 50,
            [&] { return sdmd::kernels::serial::apply_quadratic(Q, x).sum(); },
            [&] { return sdmd::kernels::apply_quadratic(Q, x).sum(); });
    }
    return 0;
}
