#pragma once

// Numerical cross-checks of the symbolic layer by central finite differences.

#include "kahler/dynamics.hpp"

namespace kahler {

/// max |K(p,q) + K(q,p)|
double antisymmetry_defect(const TwoForm& phi);

/// Max deviation between the assembled Phi_L and -d d_J L rebuilt from central
/// differences of the d_J L coefficients, relative to max(1, max |K|).
double kahler_fd_error(const LagrangianSystem& sys, const EvalPoint& p, double h = 1e-6);

/// Max |d Phi_L| over index triples, from central differences of the assembled
/// entries, relative to max(1, max |K|).
double kahler_closedness_fd(const LagrangianSystem& sys, const EvalPoint& p, double h = 1e-5);

/// Max relative deviation between energy_differential and central differences
/// of energy() with xi frozen.
double energy_differential_fd_error(const LagrangianSystem& sys, const PhaseState& s, const VectorField& xi,
                                    double h = 1e-6);

}  // namespace kahler
