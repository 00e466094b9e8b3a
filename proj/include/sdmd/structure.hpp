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

#include <string>

namespace sdmd {

enum class StructureKind {
    Linear,              // x' = A x
    LinearControl,       // x' = A x + B u
    LinearIO,            // + y = C x + D u
    Bilinear,            // x' = A x + N x u + B u
    BilinearIO,          // + y = C x + F x u + D u
    QuadraticBilinear,   // x' = A x + Q (x⊗x) + N x u + B u
    QuadraticBilinearIO, // + y = C x + K (x⊗x) + F x u + D u
};

/// Which blocks a fitted model carries and how its regressor is laid out.
struct ModelStructure {
    StructureKind kind = StructureKind::Linear;
    // QuadraticBilinearIO only: whether the output row carries the K block.
    bool include_quadratic_output = true;

    bool has_input() const { return kind != StructureKind::Linear; }
    bool has_bilinear() const {
        return kind == StructureKind::Bilinear || kind == StructureKind::BilinearIO ||
               has_quadratic();
    }
    bool has_quadratic() const {
        return kind == StructureKind::QuadraticBilinear ||
               kind == StructureKind::QuadraticBilinearIO;
    }
    bool has_output() const {
        return kind == StructureKind::LinearIO || kind == StructureKind::BilinearIO ||
               kind == StructureKind::QuadraticBilinearIO;
    }
    bool has_quadratic_output() const {
        return kind == StructureKind::QuadraticBilinearIO && include_quadratic_output;
    }

    /// Regressor row count for state dimension n:
    /// n, n+1, 2n+1 or n²+2n+1 depending on the blocks present.
    Index regressor_rows(Index n) const {
        Index rows = n;
        if (has_input()) {
            rows += 1;
        }
        if (has_bilinear()) {
            rows += n;
        }
        if (has_quadratic()) {
            rows += n * n;
        }
        return rows;
    }

    std::string name() const;

    friend bool operator==(const ModelStructure& a, const ModelStructure& b) {
        return a.kind == b.kind;
    }
};

/// Parses the kebab-case structure names used by configs and model files.
/// Throws ConfigError for unknown names.
ModelStructure parse_structure(const std::string& name);

} // namespace sdmd
