/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace sdmd {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Shape or size violations of a documented precondition.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid truncation policy parameters.
class PolicyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed configuration or experiment description.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerically unusable data (singular regressors, zero reference norms, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A simulation produced a non-finite state; carries the offending step.
class DivergenceError : public NumericalError {
public:
    explicit DivergenceError(Index step)
        : NumericalError("simulation diverged at step " + std::to_string(step)),
          step_(step) {}

    Index step() const { return step_; }

private:
    Index step_;
};

} // namespace sdmd
