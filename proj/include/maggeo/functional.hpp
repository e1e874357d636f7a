#pragma once

#include <cstdint>
#include <vector>

#include "maggeo/path.hpp"

namespace maggeo {

/// Which Hessian the velocity-slot Monge-Ampere factors use:
/// `derived` reads MA(phi_dot) as det Hess(F0 + phi_dot), `literal`
/// as det Hess(phi_dot) alone.
enum class VelocityForm { derived, literal };

struct CouplingConfig {
    double lambda = 1.0;
    VelocityForm velocity_form = VelocityForm::derived;
};

/// Path-shaped stack of scalar fields, one per knot. Used both for the
/// functional gradient and for variation directions; entries on endpoint
/// slices and collar nodes are kept identically zero.
struct PathGradient {
    std::vector<ScalarField> slices;

    double linf() const;
};

double dot(const PathGradient& a, const PathGradient& b);

/// Midpoint-in-time discretisation of (1/2) int_0^1 int phi_dot^2
/// MA(phi) dt with MA(phi) = ma_density(F0 + phi)/V; velocities at half
/// knots by forward differences, potentials by averaging.
double energy(const PotentialPath& path);

struct MagneticTermDetail {
    double value = 0.0;
    /// Half knots where the velocity-slot field fails strict convexity
    /// (the density there is still evaluated algebraically).
    int nonconvex_half_knots = 0;
};

/// Time integral of int phi_dot * slotMA(phi_dot), slot Hessian per the
/// velocity form. Sign-indefinite in general.
double magnetic_term(const PotentialPath& path, const CouplingConfig& cfg);
MagneticTermDetail magnetic_term_detail(const PotentialPath& path, const CouplingConfig& cfg);

/// energy + lambda * magnetic_term.
double landau_hall(const PotentialPath& path, const CouplingConfig& cfg);

/// Exact derivative of the discrete landau_hall value with respect to
/// every free degree of freedom (interior knots, nodes past the collar),
/// assembled as the adjoint of the evaluation: stencil transposes in
/// time, cofactor-contracted Hessian-stencil transposes in space.
/// Endpoint slices and collar nodes carry zero gradient.
PathGradient landau_hall_gradient(const PotentialPath& path, const CouplingConfig& cfg);

/// Uniform [-1,1] values on the free degrees of freedom, zero elsewhere.
/// Deterministic in (path layout, seed).
PathGradient random_direction(const PotentialPath& path, std::uint64_t seed);

/// path + eps * direction, without re-validating convexity (line-search
/// and finite-difference probes check feasibility themselves).
PotentialPath perturbed(const PotentialPath& path, const PathGradient& direction, double eps);

struct DirectionalCheck {
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
    double abs_error = 0.0;
};

/// Central finite-difference probe of landau_hall along `direction`
/// against the assembled gradient.
DirectionalCheck directional_derivative_check(const PotentialPath& path,
                                              const CouplingConfig& cfg,
                                              const PathGradient& direction, double eps);

}  // namespace maggeo
