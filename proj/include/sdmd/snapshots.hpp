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

#include <optional>
#include <string>

namespace sdmd {

/// Paired snapshot matrices sampled on a uniform time grid: X holds states at
/// t_0..t_{m−1}, Xs the same states shifted one step, U (and optionally Y)
/// the aligned input and output samples.
struct SnapshotSet {
    Matrix X;  // n × m
    Matrix Xs; // n × m
    RowVector U;
    std::optional<RowVector> Y;
    double dt = 0.0;

    Index state_dim() const { return X.rows(); }
    Index sample_count() const { return X.cols(); }
};

/// Splits a recorded trajectory (m+1 state columns) into the shifted pair
/// X = states[:, 0..m), Xs = states[:, 1..m+1).
SnapshotSet from_trajectory(const Matrix& states, const RowVector& inputs,
                            const std::optional<RowVector>& outputs, double dt);

/// CSV persistence. Header `t,u,y,x1..xn`, one sample per line, m+1 lines;
/// the u and y cells of the final line are empty (only m input/output samples
/// exist), and the whole y column is empty when Y is absent. Values use 17
/// significant digits so save/load round-trips bit-exactly.
void save_csv(const SnapshotSet& snap, const std::string& path);
SnapshotSet load_csv(const std::string& path);

} // namespace sdmd
