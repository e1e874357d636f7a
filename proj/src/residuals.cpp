#include "maggeo/residuals.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace maggeo {

namespace {

double slot_factorial(int dim) { return dim == 2 ? 2.0 : 1.0; }

/// Residuals are evaluated past the Dirichlet collar whenever the grid
/// has room for it; tiny grids fall back to the full interior.
int evaluation_depth(const Grid& g) {
    int min_points = g.points(0);
    if (g.dim() == 2) min_points = std::min(min_points, g.points(1));
    return min_points >= 2 * kCollarLayers + 2 ? kCollarLayers : 1;
}

double axis_weight_from(int k, int lo, int hi, double h) {
    if (k < lo || k > hi) return 0.0;
    return (k == lo || k == hi) ? 0.5 * h : h;
}

/// Trapezoid weight on the sub-box of nodes at least `depth` layers in.
double eval_weight(const Grid& g, int ix, int iy, int depth) {
    double w = axis_weight_from(ix, depth, g.points(0) - 1 - depth, g.spacing(0));
    if (g.dim() == 2) {
        w *= axis_weight_from(iy, depth, g.points(1) - 1 - depth, g.spacing(1));
    }
    return w;
}

template <class Fn>
void for_each_eval_node(const Grid& g, int depth, Fn&& fn) {
    const int xlo = depth, xhi = g.points(0) - 1 - depth;
    const int ylo = g.dim() == 2 ? depth : 0;
    const int yhi = g.dim() == 2 ? g.points(1) - 1 - depth : 0;
    for (int ix = xlo; ix <= xhi; ++ix) {
        for (int iy = ylo; iy <= yhi; ++iy) {
            fn(ix, iy, g.index(ix, iy));
        }
    }
}

void push_knot(ResidualReport& report, const Grid& g, int depth, int knot, ScalarField field) {
    double l2 = 0.0, linf = 0.0;
    for_each_eval_node(g, depth, [&](int ix, int iy, int id) {
        const double r = field[id];
        l2 += eval_weight(g, ix, iy, depth) * r * r;
        linf = std::max(linf, std::abs(r));
    });
    l2 = std::sqrt(l2);
    report.knots.push_back(knot);
    report.fields.push_back(std::move(field));
    report.l2.push_back(l2);
    report.linf.push_back(linf);
    report.max_l2 = std::max(report.max_l2, l2);
    report.max_linf = std::max(report.max_linf, linf);
}

/// phi_ddot * ma_density(F0+phi)/V - (n/V) * cofactor_pairing(phi_dot,
/// phi_dot, F0+phi slots): the lambda-independent part of both residuals.
ScalarField classical_terms(const PotentialPath& path, int k) {
    const Grid& g = path.grid();
    const double volume = path.background().volume();
    const double n = g.dim();
    ScalarField vdot = time_derivative(path, k, 1);
    ScalarField vddot = time_derivative(path, k, 2);
    ScalarField total = path.total_slice(k);
    ScalarField density = ma_density(total);
    std::vector<ScalarField> slots;
    if (g.dim() == 2) slots.push_back(total);
    ScalarField pairing = cofactor_pairing(vdot, vdot, slots);
    ScalarField out(g);
    for (int id = 0; id < g.node_count(); ++id) {
        out[id] = (vddot[id] * density[id] - n * pairing[id]) / volume;
    }
    return out;
}

ScalarField velocity_slot_total(const PotentialPath& path, const ScalarField& vdot,
                                VelocityForm form) {
    if (form == VelocityForm::literal) return vdot;
    ScalarField out = path.background().f0();
    for (int id = 0; id < out.grid().node_count(); ++id) out[id] += vdot[id];
    return out;
}

}  // namespace

ResidualReport geodesic_residual(const PotentialPath& path) {
    ResidualReport report;
    const Grid& g = path.grid();
    const int depth = evaluation_depth(g);
    for (int k = 1; k < path.time().steps(); ++k) {
        ScalarField r = classical_terms(path, k);
        ScalarField field(g);
        for_each_eval_node(g, depth, [&](int, int, int id) { field[id] = r[id]; });
        push_knot(report, g, depth, k, std::move(field));
    }
    return report;
}

ResidualReport magnetic_residual(const PotentialPath& path, const CouplingConfig& cfg) {
    ResidualReport report;
    const Grid& g = path.grid();
    const int depth = evaluation_depth(g);
    const double volume = path.background().volume();
    const double n = g.dim();
    const double nf = slot_factorial(g.dim());
    for (int k = 1; k < path.time().steps(); ++k) {
        ScalarField r = classical_terms(path, k);
        if (cfg.lambda != 0.0) {
            ScalarField vdot = time_derivative(path, k, 1);
            ScalarField vddot = time_derivative(path, k, 2);
            HessField hdot = hessian_fd(vdot);
            HessField hddot = hessian_fd(vddot);
            HessField hslot = hessian_fd(velocity_slot_total(path, vdot, cfg.velocity_form));
            for_each_eval_node(g, depth, [&](int, int, int id) {
                double beta;
                if (g.dim() == 1) {
                    const std::array<Sym, 1> t2{hddot[id]};
                    beta = 2.0 * n * nf * mixed_discriminant(t2, 1) / volume;
                } else {
                    const std::array<Sym, 2> t2{hddot[id], hslot[id]};
                    const std::array<Sym, 2> t3{hdot[id], hddot[id]};
                    beta = (2.0 * n * nf * mixed_discriminant(t2, 2) +
                            n * (n - 1.0) * nf * mixed_discriminant(t3, 2)) /
                           volume;
                }
                r[id] += cfg.lambda * beta;
            });
        }
        ScalarField field(g);
        for_each_eval_node(g, depth, [&](int, int, int id) { field[id] = r[id]; });
        push_knot(report, g, depth, k, std::move(field));
    }
    return report;
}

ResidualReport corollary_sum_residual(const PotentialPath& path, const CouplingConfig& cfg) {
    ResidualReport report;
    const Grid& g = path.grid();
    const int depth = evaluation_depth(g);
    const double volume = path.background().volume();
    const double n = g.dim();
    const double nf = slot_factorial(g.dim());
    auto entry_sum = [&](const Sym& s) {
        return g.dim() == 1 ? s.xx : s.xx + 2.0 * s.xy + s.yy;
    };
    for (int k = 1; k < path.time().steps(); ++k) {
        ScalarField vdot = time_derivative(path, k, 1);
        ScalarField vddot = time_derivative(path, k, 2);
        ScalarField total = path.total_slice(k);
        HessField htotal = hessian_fd(total);
        HessField hdot = hessian_fd(vdot);
        HessField hddot = hessian_fd(vddot);
        VectorField gdot = gradient_fd(vdot);
        ScalarField field(g);
        for_each_eval_node(g, depth, [&](int, int, int id) {
            const double lhs = vddot[id] * nf * sym_det(htotal[id], g.dim()) / volume;
            const double grad_sum = gdot[id][0] + (g.dim() == 2 ? gdot[id][1] : 0.0);
            const double s_total = entry_sum(htotal[id]);
            const double s_dot = entry_sum(hdot[id]);
            const double s_ddot = entry_sum(hddot[id]);
            double rhs = (n / volume) * grad_sum * grad_sum *
                         (g.dim() == 1 ? 1.0 : std::pow(s_total, n - 1.0));
            rhs -= cfg.lambda * (2.0 * n / volume) * s_ddot *
                   (g.dim() == 1 ? 1.0 : std::pow(s_dot, n - 1.0));
            if (g.dim() == 2) {
                rhs -= cfg.lambda * (n * (n - 1.0) / volume) * s_dot * s_ddot;
            }
            field[id] = lhs - rhs;
        });
        push_knot(report, g, depth, k, std::move(field));
    }
    return report;
}

ResidualReport hcma_residual(const PotentialPath& path) {
    ResidualReport report;
    const Grid& g = path.grid();
    const int depth = evaluation_depth(g);
    for (int k = 1; k < path.time().steps(); ++k) {
        ScalarField vdot = time_derivative(path, k, 1);
        ScalarField ftt = time_derivative(path, k, 2);
        HessField hx = hessian_fd(path.total_slice(k));
        VectorField gmix = gradient_fd(vdot);
        ScalarField field(g);
        for_each_eval_node(g, depth, [&](int, int, int id) {
            double det, spatial;
            if (g.dim() == 1) {
                spatial = hx[id].xx;
                det = hx[id].xx * ftt[id] - gmix[id][0] * gmix[id][0];
            } else {
                const Sym& s = hx[id];
                const double gx = gmix[id][0];
                const double gy = gmix[id][1];
                spatial = sym_det(s, 2);
                det = s.xx * (s.yy * ftt[id] - gy * gy) - s.xy * (s.xy * ftt[id] - gx * gy) +
                      gx * (s.xy * gy - s.yy * gx);
            }
            field[id] = det / (1.0 + std::abs(spatial));
        });
        push_knot(report, g, depth, k, std::move(field));
    }
    return report;
}

std::vector<double> energy_profile(const PotentialPath& path) {
    const Grid& g = path.grid();
    const double volume = path.background().volume();
    std::vector<double> out;
    out.reserve(path.time().steps() - 1);
    for (int k = 1; k < path.time().steps(); ++k) {
        ScalarField vdot = time_derivative(path, k, 1);
        ScalarField density = ma_density(path.total_slice(k));
        ScalarField integrand(g);
        for (int id = 0; id < g.node_count(); ++id) {
            integrand[id] = vdot[id] * vdot[id] * density[id];
        }
        out.push_back(integrate(integrand, Support::interior) / volume);
    }
    return out;
}

}  // namespace maggeo
