/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#include "sdmd/structure.hpp"

namespace sdmd {

std::string ModelStructure::name() const {
    switch (kind) {
    case StructureKind::Linear:
        return "linear";
    case StructureKind::LinearControl:
        return "linear-control";
    case StructureKind::LinearIO:
        return "linear-io";
    case StructureKind::Bilinear:
        return "bilinear";
    case StructureKind::BilinearIO:
        return "bilinear-io";
    case StructureKind::QuadraticBilinear:
        return "quadratic-bilinear";
    case StructureKind::QuadraticBilinearIO:
        return "quadratic-bilinear-io";
    }
    return "unknown";
}

ModelStructure parse_structure(const std::string& name) {
    ModelStructure s;
    if (name == "linear") {
        s.kind = StructureKind::Linear;
    } else if (name == "linear-control") {
        s.kind = StructureKind::LinearControl;
    } else if (name == "linear-io") {
        s.kind = StructureKind::LinearIO;
    } else if (name == "bilinear") {
        s.kind = StructureKind::Bilinear;
    } else if (name == "bilinear-io") {
        s.kind = StructureKind::BilinearIO;
    } else if (name == "quadratic-bilinear") {
        s.kind = StructureKind::QuadraticBilinear;
    } else if (name == "quadratic-bilinear-io") {
        s.kind = StructureKind::QuadraticBilinearIO;
    } else {
        throw ConfigError("unknown model structure '" + name + "'");
    }
    return s;
}

} // namespace sdmd
