#pragma once

#include "accelfem/integrator.hpp"

namespace afem {

/// Fourier differentiation matrix on n equispaced points of [0, L), n even.
Eigen::MatrixXd fourier_derivative(int n, double length);

/// Fourier collocation solve of the one-dimensional problem on `lattice`
/// with the same implicit Euler-Maruyama time stepping as the lattice scheme.
/// Used as a reference solution; nodal values are point samples of u.
Trajectory spectral_reference(const ProblemSpec& problem, const TorusLattice& lattice, const NoisePath* noise,
                              double T, int steps, const RecordPolicy& record);

}  // namespace afem
