/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sdmd::detail {

// 17 significant digits: enough for double round-trips through decimal.
inline std::string to_decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(context + ": cannot parse number '" + s + "'");
    }
    return v;
}

} // namespace sdmd::detail
