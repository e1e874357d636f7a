#include "maggeo/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace {

double slot_factorial(int dim) { return dim == 2 ? 2.0 : 1.0; }

ScalarField half_knot_velocity(const PotentialPath& path, int k) {
    const double itau = 1.0 / path.time().tau();
    const ScalarField& a = path.slice(k);
    const ScalarField& b = path.slice(k + 1);
    ScalarField out(path.grid());
    for (int id = 0; id < path.grid().node_count(); ++id) out[id] = (b[id] - a[id]) * itau;
    return out;
}

ScalarField half_knot_total(const PotentialPath& path, int k) {
    const ScalarField& f0 = path.background().f0();
    const ScalarField& a = path.slice(k);
    const ScalarField& b = path.slice(k + 1);
    ScalarField out(path.grid());
    for (int id = 0; id < path.grid().node_count(); ++id) {
        out[id] = f0[id] + 0.5 * (a[id] + b[id]);
    }
    return out;
}

ScalarField velocity_slot_field(const PotentialPath& path, const ScalarField& vel,
                                VelocityForm form) {
    if (form == VelocityForm::literal) return vel;
    const ScalarField& f0 = path.background().f0();
    ScalarField out(path.grid());
    for (int id = 0; id < path.grid().node_count(); ++id) out[id] = f0[id] + vel[id];
    return out;
}

template <class Fn>
void for_each_interior(const Grid& g, Fn&& fn) {
    const int ylo = g.dim() == 2 ? 1 : 0;
    const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        for (int iy = ylo; iy < yhi; ++iy) {
            fn(ix, iy, g.index(ix, iy));
        }
    }
}

/// Transpose of the hessian_fd stencil at (ix, iy), contracted with the
/// symmetric weight matrix W (off-diagonal counted twice).
void scatter_hessian_adjoint(ScalarField& out, int ix, int iy, const Sym& w) {
    const Grid& g = out.grid();
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    out.at(ix + 1, iy) += w.xx * ihx2;
    out.at(ix, iy) -= 2.0 * w.xx * ihx2;
    out.at(ix - 1, iy) += w.xx * ihx2;
    if (g.dim() == 2) {
        const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
        out.at(ix, iy + 1) += w.yy * ihy2;
        out.at(ix, iy) -= 2.0 * w.yy * ihy2;
        out.at(ix, iy - 1) += w.yy * ihy2;
        const double m = 2.0 * w.xy / (4.0 * g.spacing(0) * g.spacing(1));
        out.at(ix + 1, iy + 1) += m;
        out.at(ix + 1, iy - 1) -= m;
        out.at(ix - 1, iy + 1) -= m;
        out.at(ix - 1, iy - 1) += m;
    }
}

void mask_to_free_dofs(const PotentialPath& path, PathGradient& g) {
    const Grid& grid = path.grid();
    for (int k = 0; k < static_cast<int>(g.slices.size()); ++k) {
        if (!path.is_free_knot(k)) {
            g.slices[k] = ScalarField(grid);
            continue;
        }
        ScalarField& s = g.slices[k];
        for (int ix = 0; ix < grid.points(0); ++ix) {
            for (int iy = 0; iy < grid.points(1); ++iy) {
                if (!path.is_free_node(ix, iy)) s.at(ix, iy) = 0.0;
            }
        }
    }
}

}  // namespace

double PathGradient::linf() const {
    double m = 0.0;
    for (const ScalarField& s : slices) {
        for (double x : s.values()) m = std::max(m, std::abs(x));
    }
    return m;
}

double dot(const PathGradient& a, const PathGradient& b) {
    double acc = 0.0;
    for (size_t k = 0; k < a.slices.size(); ++k) {
        const auto& u = a.slices[k].values();
        const auto& v = b.slices[k].values();
        for (size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    }
    return acc;
}

double energy(const PotentialPath& path) {
    const Grid& g = path.grid();
    const double tau = path.time().tau();
    const double volume = path.background().volume();
    const double nf = slot_factorial(g.dim());
    double acc = 0.0;
    for (int k = 0; k < path.time().steps(); ++k) {
        ScalarField vel = half_knot_velocity(path, k);
        HessField h = hessian_fd(half_knot_total(path, k));
        ScalarField integrand(g);
        for_each_interior(g, [&](int, int, int id) {
            integrand[id] = vel[id] * vel[id] * nf * sym_det(h[id], g.dim());
        });
        acc += 0.5 * tau * integrate(integrand, Support::interior) / volume;
    }
    return acc;
}

MagneticTermDetail magnetic_term_detail(const PotentialPath& path, const CouplingConfig& cfg) {
    const Grid& g = path.grid();
    const double tau = path.time().tau();
    const double volume = path.background().volume();
    const double nf = slot_factorial(g.dim());
    MagneticTermDetail detail;
    for (int k = 0; k < path.time().steps(); ++k) {
        ScalarField vel = half_knot_velocity(path, k);
        ScalarField slot = velocity_slot_field(path, vel, cfg.velocity_form);
        HessField h = hessian_fd(slot);
        ScalarField integrand(g);
        double min_eig = std::numeric_limits<double>::infinity();
        for_each_interior(g, [&](int, int, int id) {
            integrand[id] = vel[id] * nf * sym_det(h[id], g.dim());
            min_eig = std::min(min_eig, sym_min_eigenvalue(h[id], g.dim()));
        });
        if (!(min_eig > 0.0)) ++detail.nonconvex_half_knots;
        detail.value += tau * integrate(integrand, Support::interior) / volume;
    }
    return detail;
}

double magnetic_term(const PotentialPath& path, const CouplingConfig& cfg) {
    return magnetic_term_detail(path, cfg).value;
}

double landau_hall(const PotentialPath& path, const CouplingConfig& cfg) {
    double value = energy(path);
    if (cfg.lambda != 0.0) value += cfg.lambda * magnetic_term(path, cfg);
    return value;
}

PathGradient landau_hall_gradient(const PotentialPath& path, const CouplingConfig& cfg) {
    const Grid& g = path.grid();
    const int steps = path.time().steps();
    const double tau = path.time().tau();
    const double volume = path.background().volume();
    const double nf = slot_factorial(g.dim());

    PathGradient grad;
    grad.slices.assign(static_cast<size_t>(steps) + 1, ScalarField(g));

    ScalarField weights(g);
    for_each_interior(g, [&](int ix, int iy, int id) {
        weights[id] = quad_weight(g, ix, iy, Support::interior);
    });

    ScalarField accum(g);
    for (int k = 0; k < steps; ++k) {
        ScalarField vel = half_knot_velocity(path, k);

        // Energy: velocity channel, then midpoint (density) channel.
        HessField hmid = hessian_fd(half_knot_total(path, k));
        for (auto& x : accum.values()) x = 0.0;
        for_each_interior(g, [&](int ix, int iy, int id) {
            const double rho = nf * sym_det(hmid[id], g.dim()) / volume;
            const double c = weights[id] * vel[id] * rho;
            grad.slices[k + 1][id] += c;
            grad.slices[k][id] -= c;
            const double a = 0.5 * tau * weights[id] * vel[id] * vel[id] * nf / volume;
            Sym cof = sym_cofactor(hmid[id], g.dim());
            cof.xx *= a;
            cof.xy *= a;
            cof.yy *= a;
            scatter_hessian_adjoint(accum, ix, iy, cof);
        });
        for (int id = 0; id < g.node_count(); ++id) {
            grad.slices[k][id] += 0.5 * accum[id];
            grad.slices[k + 1][id] += 0.5 * accum[id];
        }

        if (cfg.lambda == 0.0) continue;

        // Magnetic term: both channels reach the path through the velocity.
        ScalarField slot = velocity_slot_field(path, vel, cfg.velocity_form);
        HessField hv = hessian_fd(slot);
        for (auto& x : accum.values()) x = 0.0;
        for_each_interior(g, [&](int ix, int iy, int id) {
            const double sigma = nf * sym_det(hv[id], g.dim()) / volume;
            const double c = cfg.lambda * weights[id] * sigma;
            grad.slices[k + 1][id] += c;
            grad.slices[k][id] -= c;
            const double a = cfg.lambda * weights[id] * vel[id] * nf / volume;
            Sym cof = sym_cofactor(hv[id], g.dim());
            cof.xx *= a;
            cof.xy *= a;
            cof.yy *= a;
            scatter_hessian_adjoint(accum, ix, iy, cof);
        });
        for (int id = 0; id < g.node_count(); ++id) {
            grad.slices[k + 1][id] += accum[id];
            grad.slices[k][id] -= accum[id];
        }
    }

    mask_to_free_dofs(path, grad);
    return grad;
}

PathGradient random_direction(const PotentialPath& path, std::uint64_t seed) {
    const Grid& g = path.grid();
    PathGradient dir;
    dir.slices.assign(static_cast<size_t>(path.time().steps()) + 1, ScalarField(g));
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
    };
    for (int k = 1; k < path.time().steps(); ++k) {
        for (int ix = 0; ix < g.points(0); ++ix) {
            for (int iy = 0; iy < g.points(1); ++iy) {
                if (path.is_free_node(ix, iy)) dir.slices[k].at(ix, iy) = uniform();
            }
        }
    }
    return dir;
}

PotentialPath perturbed(const PotentialPath& path, const PathGradient& direction, double eps) {
    std::vector<ScalarField> slices;
    slices.reserve(path.slice_count());
    for (int k = 0; k < path.slice_count(); ++k) {
        ScalarField s = path.slice(k);
        const ScalarField& d = direction.slices[k];
        for (int id = 0; id < path.grid().node_count(); ++id) s[id] += eps * d[id];
        slices.push_back(std::move(s));
    }
    return PotentialPath(path.background_ptr(), path.time(), std::move(slices),
                         /*validate_convexity=*/false);
}

DirectionalCheck directional_derivative_check(const PotentialPath& path,
                                              const CouplingConfig& cfg,
                                              const PathGradient& direction, double eps) {
    DirectionalCheck out;
    out.analytic = dot(landau_hall_gradient(path, cfg), direction);
    const double plus = landau_hall(perturbed(path, direction, eps), cfg);
    const double minus = landau_hall(perturbed(path, direction, -eps), cfg);
    out.numeric = (plus - minus) / (2.0 * eps);
    out.abs_error = std::abs(out.analytic - out.numeric);
    const double scale = std::max(std::abs(out.analytic), std::abs(out.numeric));
    out.rel_error = scale > 0.0 ? out.abs_error / scale : 0.0;
    return out;
}

}  // namespace maggeo
