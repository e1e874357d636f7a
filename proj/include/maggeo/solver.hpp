#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "maggeo/residuals.hpp"

namespace maggeo {

enum class InitialPathChoice { linear, oracle };

struct SolverConfig {
    int max_iterations = 20000;          // per lambda stage
    double gradient_tolerance = 1e-9;    // sup norm of the free-dof gradient
    double initial_step = 1.0;
    double backtracking = 0.5;           // in (0,1)
    double armijo = 1e-4;                // in (0,1)
    double convexity_margin = 1e-6;      // minimum Hessian eigenvalue kept by iterates
    std::vector<double> lambda_schedule{0.0};
    VelocityForm velocity_form = VelocityForm::derived;
    std::uint64_t rng_seed = 0;
    InitialPathChoice initial_path = InitialPathChoice::linear;
    std::optional<Grid> oracle_dual_grid;  // required when initial_path == oracle
};

struct TraceRow {
    int iteration;      // within the stage, row 0 is the stage's starting state
    double lambda;
    double lh_value;
    double grad_linf;
    double min_eig;
};

struct SolveResult {
    PotentialPath path;
    bool converged = false;
    int iterations = 0;          // accepted steps over all stages
    double final_grad_linf = 0.0;
    double min_velocity_eigenvalue = 0.0;  // over half knots of the final path
    std::vector<TraceRow> trace;
    ResidualReport geodesic;
    ResidualReport magnetic_derived;
    ResidualReport magnetic_literal;
    ResidualReport hcma;
};

/// Classical toric geodesic oracle: linear interpolation of Legendre
/// duals, F_t = ((1-t) (F0+phi0)* + t (F0+phi1)*)*, returned as
/// perturbations with the endpoint slices replaced by the exact inputs.
/// The transforms are evaluated through convex cubic-spline interpolants
/// (values at the dual/primal nodes, maximisation by bisection on the
/// interpolant slope), so the slices are smooth enough for pointwise
/// residual studies. 1-D only.
PotentialPath oracle_geodesic(const ToricPotential& phi0, const ToricPotential& phi1,
                              TimeAxis time, const Grid& dual_grid);

/// Fixed-endpoint minimisation of the discrete Landau-Hall functional
/// with continuation in lambda: for each schedule entry, gradient descent
/// with Armijo backtracking (Barzilai-Borwein trial steps), every
/// accepted iterate keeping all slices' minimum Hessian eigenvalue at or
/// above the convexity margin.
SolveResult solve(const ToricPotential& phi0, const ToricPotential& phi1, TimeAxis time,
                  const SolverConfig& cfg);

}  // namespace maggeo
