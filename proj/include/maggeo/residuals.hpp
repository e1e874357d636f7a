#pragma once

#include <vector>

#include "maggeo/functional.hpp"

namespace maggeo {

/// Pointwise residual fields per interior knot, evaluated on the nodes
/// past the Dirichlet collar (where the path actually carries solved
/// data), with L2 (quadrature-weighted) and sup norms per knot and
/// aggregated over knots.
struct ResidualReport {
    std::vector<int> knots;              // interior knot indices 1..M-1
    std::vector<ScalarField> fields;     // residual values, zero off the evaluation set
    std::vector<double> l2;              // per knot
    std::vector<double> linf;            // per knot
    double max_l2 = 0.0;
    double max_linf = 0.0;
};

/// phi_ddot * MA(phi) - (n/V) d(phi_dot) d^c(phi_dot) wedge omega_phi^{n-1}
/// in toric real form; zero exactly on constant-in-x shift paths.
ResidualReport geodesic_residual(const PotentialPath& path);

/// Left minus right side of the magnetic geodesic equation with the
/// mixed-discriminant dictionary; the velocity-slot Hessians follow
/// cfg.velocity_form and cfg.lambda scales the two terms that carry the
/// second time derivative under dd^c. lambda = 0 reduces to
/// geodesic_residual term by term.
ResidualReport magnetic_residual(const PotentialPath& path, const CouplingConfig& cfg);

/// Side-by-side comparison mode that evaluates the right-hand side with
/// each parenthesised factor read as the plain sum of Hessian entries
/// raised to the displayed power (instead of determinants and mixed
/// discriminants). Comparison only; the dictionary form above is the one
/// the solver and reports use.
ResidualReport corollary_sum_residual(const PotentialPath& path, const CouplingConfig& cfg);

/// Degeneracy of the space-time Hessian of F(x, t) = F0(x) + phi_t(x):
/// det of the (n+1) x (n+1) Hessian, normalised pointwise by
/// 1 + |det Hess_x F|.
ResidualReport hcma_residual(const PotentialPath& path);

/// Per interior knot: int phi_dot^2 ma_density(F0 + phi)/V with central
/// time differences. Constant along exact geodesics of the full problem.
std::vector<double> energy_profile(const PotentialPath& path);

}  // namespace maggeo
