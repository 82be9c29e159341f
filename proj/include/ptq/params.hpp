#pragma once

namespace ptq {

/// Numeric values for the symbolic parameters of the Hamiltonian.
///
/// Invariants: lambda >= 0, mu > 0, epsilon > 0, hbar > 0. lambda == 0 is
/// accepted only by the operations that document the limit.
struct EvalParams {
    double g = 0.1;
    double lambda = 0.1;
    double mu = 1.0;
    double epsilon = 1.0;
    double hbar = 1.0;
};

/// Point (x, p) of the classical phase space.
struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

/// Throws ArgumentError if the invariants above are violated.
void validate(const EvalParams& params);

} // namespace ptq
