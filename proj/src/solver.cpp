#include "maggeo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maggeo/errors.hpp"
#include "maggeo/spline.hpp"

namespace maggeo {

namespace {

/// Extension allowance for evaluating a spline's conjugate beyond its
/// sample range (in units of the sample range width).
constexpr double kConjugateExtension = 1.0;

/// Solve d1(x) = target on [lo, hi] for an increasing slope function by
/// bisection. Caller guarantees the bracket.
template <class D1>
double invert_slope(D1&& d1, double lo, double hi, double target) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (d1(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// max_x (x * y - S(x)) over the convex range of S.
double conjugate_value(const CubicSpline& s, std::pair<double, double> range, double y) {
    if (s.derivative(range.first) > y || s.derivative(range.second) < y) {
        throw RangeCoverageError(
            "legendre oracle: slope range of the sampled potential does not reach the "
            "requested dual point");
    }
    const double x = invert_slope([&](double t) { return s.derivative(t); }, range.first,
                                  range.second, y);
    return x * y - s.value(x);
}

struct DualPair {
    CubicSpline u0;
    CubicSpline u1;
    std::pair<double, double> range;
};

/// max_y (x * y - (1-t) U0(y) - t U1(y)).
double conjugate_back(const DualPair& d, double t, double x) {
    auto slope = [&](double y) {
        return (1.0 - t) * d.u0.derivative(y) + t * d.u1.derivative(y);
    };
    if (slope(d.range.first) > x || slope(d.range.second) < x) {
        throw RangeCoverageError(
            "legendre oracle: dual box too small to reconstruct the potential at a grid "
            "node");
    }
    const double y = invert_slope(slope, d.range.first, d.range.second, x);
    return x * y - (1.0 - t) * d.u0.value(y) - t * d.u1.value(y);
}

CubicSpline spline_of_total(const ToricPotential& p) {
    const Grid& g = p.background().grid();
    return CubicSpline(g.lo(0), g.spacing(0), p.total().values());
}

}  // namespace

PotentialPath oracle_geodesic(const ToricPotential& phi0, const ToricPotential& phi1,
                              TimeAxis time, const Grid& dual_grid) {
    const Grid& g = phi0.background().grid();
    if (g.dim() != 1 || dual_grid.dim() != 1) {
        throw PreconditionError("the geodesic oracle is built for 1-D grids");
    }
    if (!phi1.background().grid().same_layout(g)) {
        throw PreconditionError("oracle endpoints live on different grids");
    }

    CubicSpline s0 = spline_of_total(phi0);
    CubicSpline s1 = spline_of_total(phi1);
    const double primal_margin = kConjugateExtension * (g.hi(0) - g.lo(0));
    const auto r0 = s0.convex_range(primal_margin);
    const auto r1 = s1.convex_range(primal_margin);

    std::vector<double> u0(dual_grid.points(0)), u1(dual_grid.points(0));
    for (int j = 0; j < dual_grid.points(0); ++j) {
        const double y = dual_grid.coord(0, j);
        u0[j] = conjugate_value(s0, r0, y);
        u1[j] = conjugate_value(s1, r1, y);
    }

    const double dual_margin = kConjugateExtension * (dual_grid.hi(0) - dual_grid.lo(0));
    DualPair dual{CubicSpline(dual_grid.lo(0), dual_grid.spacing(0), std::move(u0)),
                  CubicSpline(dual_grid.lo(0), dual_grid.spacing(0), std::move(u1)),
                  {0.0, 0.0}};
    const auto q0 = dual.u0.convex_range(dual_margin);
    const auto q1 = dual.u1.convex_range(dual_margin);
    dual.range = {std::max(q0.first, q1.first), std::min(q0.second, q1.second)};

    const ScalarField& f0 = phi0.background().f0();
    std::vector<ScalarField> slices;
    slices.reserve(time.steps() + 1);
    slices.push_back(phi0.phi());
    for (int k = 1; k < time.steps(); ++k) {
        const double t = time.knot(k);
        ScalarField phi(g);
        for (int j = 0; j < g.points(0); ++j) {
            phi[j] = conjugate_back(dual, t, g.coord(0, j)) - f0[j];
        }
        slices.push_back(std::move(phi));
    }
    slices.push_back(phi1.phi());
    return PotentialPath(phi0.background_ptr(), time, std::move(slices),
                         /*validate_convexity=*/false);
}

namespace {

void validate_config(const SolverConfig& cfg) {
    if (cfg.lambda_schedule.empty() || cfg.lambda_schedule.front() != 0.0) {
        throw PreconditionError("lambda schedule must start at 0");
    }
    if (!std::is_sorted(cfg.lambda_schedule.begin(), cfg.lambda_schedule.end())) {
        throw PreconditionError("lambda schedule must be sorted");
    }
    if (!(cfg.gradient_tolerance > 0.0)) throw PreconditionError("gradient tolerance must be > 0");
    if (!(cfg.convexity_margin > 0.0)) throw PreconditionError("convexity margin must be > 0");
    if (!(cfg.backtracking > 0.0 && cfg.backtracking < 1.0)) {
        throw PreconditionError("backtracking factor must lie in (0,1)");
    }
    if (!(cfg.armijo > 0.0 && cfg.armijo < 1.0)) {
        throw PreconditionError("armijo constant must lie in (0,1)");
    }
    if (!(cfg.initial_step > 0.0)) throw PreconditionError("initial step must be > 0");
}

PotentialPath negate_step(const PotentialPath& path, const PathGradient& g, double step) {
    return perturbed(path, g, -step);
}

}  // namespace

SolveResult solve(const ToricPotential& phi0, const ToricPotential& phi1, TimeAxis time,
                  const SolverConfig& cfg) {
    validate_config(cfg);
    const double delta = cfg.convexity_margin;
    if (min_hessian_eigenvalue(phi0.total()) < delta ||
        min_hessian_eigenvalue(phi1.total()) < delta) {
        throw PreconditionError("endpoint potential violates the convexity margin");
    }

    PotentialPath path = [&] {
        if (cfg.initial_path == InitialPathChoice::oracle) {
            if (!cfg.oracle_dual_grid) {
                throw PreconditionError("oracle initial path needs a dual grid");
            }
            return oracle_geodesic(phi0, phi1, time, *cfg.oracle_dual_grid);
        }
        return PotentialPath::linear_interpolation(phi0, phi1, time);
    }();
    if (path.min_hessian_eigenvalue() < delta) {
        throw PreconditionError("initial path violates the convexity margin");
    }

    SolveResult result{std::move(path)};
    bool all_converged = true;

    for (double lambda : cfg.lambda_schedule) {
        const CouplingConfig coupling{lambda, cfg.velocity_form};
        double f = landau_hall(result.path, coupling);
        PathGradient g = landau_hall_gradient(result.path, coupling);
        double gg = dot(g, g);
        double ginf = g.linf();
        double min_eig = result.path.min_hessian_eigenvalue();
        result.trace.push_back({0, lambda, f, ginf, min_eig});
        result.final_grad_linf = ginf;

        double step = cfg.initial_step;
        bool stage_converged = ginf <= cfg.gradient_tolerance;
        for (int it = 1; it <= cfg.max_iterations && !stage_converged; ++it) {
            double trial = step;
            bool accepted = false;
            PotentialPath candidate = result.path;
            double fc = f, me = min_eig;
            while (trial > 1e-18) {
                candidate = negate_step(result.path, g, trial);
                me = candidate.min_hessian_eigenvalue();
                if (me >= delta) {
                    fc = landau_hall(candidate, coupling);
                    if (fc <= f - cfg.armijo * trial * gg) {
                        accepted = true;
                        break;
                    }
                }
                trial *= cfg.backtracking;
            }
            if (!accepted) break;  // line search stalled; stage ends unconverged

            PathGradient gnew = landau_hall_gradient(candidate, coupling);
            const double g_dot_gnew = dot(g, gnew);
            const double sy = -trial * (g_dot_gnew - gg);
            const double ss = trial * trial * gg;
            step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : trial * 2.0;

            result.path = std::move(candidate);
            f = fc;
            g = std::move(gnew);
            gg = dot(g, g);
            ginf = g.linf();
            min_eig = me;
            ++result.iterations;
            result.trace.push_back({it, lambda, f, ginf, min_eig});
            result.final_grad_linf = ginf;
            stage_converged = ginf <= cfg.gradient_tolerance;
        }
        all_converged = all_converged && stage_converged;
    }

    result.converged = all_converged;

    const CouplingConfig final_coupling{cfg.lambda_schedule.back(), cfg.velocity_form};
    result.geodesic = geodesic_residual(result.path);
    result.magnetic_derived =
        magnetic_residual(result.path, {final_coupling.lambda, VelocityForm::derived});
    result.magnetic_literal =
        magnetic_residual(result.path, {final_coupling.lambda, VelocityForm::literal});
    result.hcma = hcma_residual(result.path);

    double min_vel_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k < result.path.time().steps(); ++k) {
        ScalarField vel(result.path.grid());
        const double itau = 1.0 / result.path.time().tau();
        for (int id = 0; id < result.path.grid().node_count(); ++id) {
            vel[id] = (result.path.slice(k + 1)[id] - result.path.slice(k)[id]) * itau;
        }
        ScalarField slot = result.path.background().f0();
        for (int id = 0; id < slot.grid().node_count(); ++id) slot[id] += vel[id];
        min_vel_eig = std::min(min_vel_eig, min_hessian_eigenvalue(slot));
    }
    result.min_velocity_eigenvalue = min_vel_eig;
    return result;
}

}  // namespace maggeo
