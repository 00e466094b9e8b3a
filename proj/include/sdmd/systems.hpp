/******************************************************************************
 *
 * Copyright (c) 2026, the sdmd project developers. See the top-level
 * LICENSE file for details.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 *****************************************************************************/

#pragma once

#include "sdmd/model.hpp"
#include "sdmd/types.hpp"

namespace sdmd {

/// Finite-difference lattice for the viscous Burgers' equation on (0, L) with
/// boundary control v(0,t) = u(t) and v(L,t) = 0.
struct BurgersConfig {
    Index n0 = 40;         // interior grid points
    double nu = 0.01;      // viscosity
    double length = 1.0;   // domain length L; grid spacing is L/(n0+1)
    Index output_index = 0; // 1-based observation point; 0 means ceil(n0/2)
};

/// Semi-discretized Burgers' lattice as a continuous quadratic-bilinear model
/// of order n0: tridiagonal diffusion in A, centered convection in Q (stored
/// sparse, each v_i·v_j coefficient split evenly over the (i,j) and (j,i)
/// Kronecker slots), boundary terms in N and B, and a unit output row
/// selecting the observation point.
ContinuousModel build_burgers_quadratic(const BurgersConfig& cfg);

/// Lifts a quadratic-bilinear model of order n0 to a bilinear model of order
/// n0² + n0 on the augmented state [v; v⊗v], dropping the third-order terms.
/// The lifted operators are stored sparse; a dense (n0²+n0)² intermediate is
/// never allocated.
ContinuousModel carleman_bilinearize(const ContinuousModel& qb);

/// Three coupled van der Pol oscillators; the middle one is driven by u and
/// coupled to both neighbors.
struct VdpConfig {
    double mu = 0.5;
    double a = 0.5;
    double b = 0.2;
};

/// Right-hand side of the six coupled ODEs at state x and input u.
Vector vdp_rhs(const VdpConfig& cfg, const Vector& x, double u);

/// Observation map y = x_3 used with the oscillator chain.
RowVector vdp_output_row();

struct VdpSimulation {
    Matrix states;     // 6 × (m+1)
    RowVector outputs; // y_k = x_3(t_k), k = 0..m−1
};

/// Explicit-Euler rollout of the oscillator chain.
VdpSimulation simulate_vdp(const VdpConfig& cfg, const RowVector& u, double dt,
                           const Vector& x0);

} // namespace sdmd
