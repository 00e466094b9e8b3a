/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/snapshots.hpp"

#include "sdmd/detail/format.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace sdmd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

SnapshotSet from_trajectory(const Matrix& states, const RowVector& inputs,
                            const std::optional<RowVector>& outputs, double dt) {
    const Index m = inputs.size();
    if (m < 1) {
        throw DimensionError("from_trajectory: need at least one input sample");
    }
    if (states.cols() != m + 1) {
        throw DimensionError("from_trajectory: expected " + std::to_string(m + 1) +
                             " state columns, got " + std::to_string(states.cols()));
    }
    if (outputs && outputs->size() != m) {
        throw DimensionError("from_trajectory: output count does not match inputs");
    }
    if (!(dt > 0.0)) {
        throw DimensionError("from_trajectory: dt must be positive");
    }

    SnapshotSet snap;
    snap.X = states.leftCols(m);
    snap.Xs = states.rightCols(m);
    snap.U = inputs;
    snap.Y = outputs;
    snap.dt = dt;
    return snap;
}

void save_csv(const SnapshotSet& snap, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_csv: cannot open '" + path + "'");
    }
    const Index n = snap.state_dim();
    const Index m = snap.sample_count();

    out << "t,u,y";
    for (Index i = 1; i <= n; ++i) {
        out << ",x" << i;
    }
    out << '\n';

    for (Index k = 0; k <= m; ++k) {
        out << detail::to_decimal(static_cast<double>(k) * snap.dt) << ',';
        if (k < m) {
            out << detail::to_decimal(snap.U(k));
        }
        out << ',';
        if (k < m && snap.Y) {
            out << detail::to_decimal((*snap.Y)(k));
        }
        // State k lives in X for k < m and in the last Xs column for k = m.
        for (Index i = 0; i < n; ++i) {
            const double v = (k < m) ? snap.X(i, k) : snap.Xs(i, m - 1);
            out << ',' << detail::to_decimal(v);
        }
        out << '\n';
    }
}

SnapshotSet load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_csv: cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("load_csv: empty file");
    }
    const auto header = split_line(line);
    if (header.size() < 4 || header[0] != "t" || header[1] != "u" || header[2] != "y") {
        throw std::runtime_error("load_csv: expected header t,u,y,x1..xn");
    }
    const Index n = static_cast<Index>(header.size()) - 3;

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (static_cast<Index>(cells.size()) != n + 3) {
            throw std::runtime_error("load_csv: row with wrong cell count");
        }
        rows.push_back(std::move(cells));
    }
    if (rows.size() < 2) {
        throw std::runtime_error("load_csv: need at least two sample rows");
    }
    const Index m = static_cast<Index>(rows.size()) - 1;

    Matrix states(n, m + 1);
    RowVector inputs(m);
    RowVector outputs(m);
    Index output_count = 0;
    for (Index k = 0; k <= m; ++k) {
        const auto& cells = rows[static_cast<std::size_t>(k)];
        if (k < m) {
            inputs(k) = detail::parse_double(cells[1], "load_csv");
            if (!cells[2].empty()) {
                outputs(k) = detail::parse_double(cells[2], "load_csv");
                ++output_count;
            }
        }
        for (Index i = 0; i < n; ++i) {
            states(i, k) = detail::parse_double(cells[static_cast<std::size_t>(i) + 3],
                                                "load_csv");
        }
    }
    const bool any_output = output_count > 0;
    if (any_output && output_count != m) {
        throw std::runtime_error("load_csv: y column only partially filled");
    }

    const double t0 = detail::parse_double(rows[0][0], "load_csv");
    const double t1 = detail::parse_double(rows[1][0], "load_csv");
    const double dt = t1 - t0;

    return from_trajectory(states, inputs,
                           any_output ? std::optional<RowVector>(outputs) : std::nullopt,
                           dt);
}

} // namespace sdmd
