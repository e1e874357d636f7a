#include "maggeo/ma_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "maggeo/errors.hpp"

namespace maggeo {

double sym_det(const Sym& s, int dim) {
    return dim == 1 ? s.xx : s.xx * s.yy - s.xy * s.xy;
}

Sym sym_cofactor(const Sym& s, int dim) {
    if (dim == 1) return Sym{1.0, 0.0, 0.0};
    return Sym{s.yy, -s.xy, s.xx};
}

double sym_min_eigenvalue(const Sym& s, int dim) {
    if (dim == 1) return s.xx;
    const double tr = s.xx + s.yy;
    const double gap = std::hypot(s.xx - s.yy, 2.0 * s.xy);
    return 0.5 * (tr - gap);
}

double mixed_discriminant(std::span<const Sym> slots, int dim) {
    if (static_cast<int>(slots.size()) != dim) {
        throw std::invalid_argument("mixed_discriminant expects one slot per dimension");
    }
    if (dim == 1) return slots[0].xx;
    // Inclusion-exclusion over subsets of the two slots; 1/2! up front.
    double acc = 0.0;
    for (unsigned mask = 0; mask < 4; ++mask) {
        Sym sum{};
        int size = 0;
        for (int i = 0; i < 2; ++i) {
            if (mask & (1u << i)) {
                sum.xx += slots[i].xx;
                sum.xy += slots[i].xy;
                sum.yy += slots[i].yy;
                ++size;
            }
        }
        const double sign = ((2 - size) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * sym_det(sum, 2);
    }
    return acc / 2.0;
}

namespace {

double factorial(int n) { return n == 2 ? 2.0 : 1.0; }

void check_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_layout(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

ScalarField ma_density(const ScalarField& f) {
    const Grid& g = f.grid();
    HessField h = hessian_fd(f);
    ScalarField out(g);
    const double nf = factorial(g.dim());
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            const int id = g.index(ix, iy);
            out[id] = nf * sym_det(h[id], g.dim());
        }
    }
    return out;
}

ScalarField mixed_ma_density(std::span<const ScalarField> slots) {
    if (slots.empty()) throw std::invalid_argument("mixed_ma_density needs at least one slot");
    const Grid& g = slots[0].grid();
    if (static_cast<int>(slots.size()) != g.dim()) {
        throw std::invalid_argument("mixed_ma_density expects one slot per dimension");
    }
    std::vector<HessField> hess;
    hess.reserve(slots.size());
    for (const ScalarField& s : slots) {
        check_same_grid(g, s.grid(), "mixed_ma_density");
        hess.push_back(hessian_fd(s));
    }
    ScalarField out(g);
    const double nf = factorial(g.dim());
    std::vector<Sym> mats(slots.size());
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            const int id = g.index(ix, iy);
            for (size_t s = 0; s < hess.size(); ++s) mats[s] = hess[s][id];
            out[id] = nf * mixed_discriminant(mats, g.dim());
        }
    }
    return out;
}

ScalarField cofactor_pairing(const ScalarField& u, const ScalarField& v,
                             std::span<const ScalarField> slots) {
    const Grid& g = u.grid();
    check_same_grid(g, v.grid(), "cofactor_pairing");
    if (static_cast<int>(slots.size()) != g.dim() - 1) {
        throw std::invalid_argument("cofactor_pairing expects dim-1 slot fields");
    }
    VectorField du = gradient_fd(u);
    VectorField dv = gradient_fd(v);
    ScalarField out(g);
    if (g.dim() == 1) {
        for (int ix = 1; ix < g.points(0) - 1; ++ix) {
            const int id = g.index(ix);
            out[id] = du[id][0] * dv[id][0];
        }
        return out;
    }
    check_same_grid(g, slots[0].grid(), "cofactor_pairing");
    HessField hw = hessian_fd(slots[0]);
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        for (int iy = 1; iy < g.points(1) - 1; ++iy) {
            const int id = g.index(ix, iy);
            const Sym c = sym_cofactor(hw[id], 2);
            const auto& a = du[id];
            const auto& b = dv[id];
            // (n-1)! = 1; keep the u<->v symmetric grouping exact.
            out[id] = c.xx * a[0] * b[0] + c.yy * a[1] * b[1] + c.xy * (a[0] * b[1] + a[1] * b[0]);
        }
    }
    return out;
}

ScalarField legendre(const ScalarField& f, const Grid& dual_grid) {
    const Grid& g = f.grid();
    if (dual_grid.dim() != g.dim()) {
        throw std::invalid_argument("legendre: dual grid dimension mismatch");
    }
    ScalarField out(dual_grid);
    for (int jx = 0; jx < dual_grid.points(0); ++jx) {
        for (int jy = 0; jy < dual_grid.points(1); ++jy) {
            const double y0 = dual_grid.coord(0, jx);
            const double y1 = dual_grid.dim() == 2 ? dual_grid.coord(1, jy) : 0.0;
            double best = -std::numeric_limits<double>::infinity();
            int best_ix = -1, best_iy = -1;
            for (int ix = 0; ix < g.points(0); ++ix) {
                for (int iy = 0; iy < g.points(1); ++iy) {
                    double val = g.coord(0, ix) * y0 - f.at(ix, iy);
                    if (g.dim() == 2) val += g.coord(1, iy) * y1;
                    if (val > best) {
                        best = val;
                        best_ix = ix;
                        best_iy = iy;
                    }
                }
            }
            if (g.depth(best_ix, best_iy) == 0) {
                throw RangeCoverageError(
                    "legendre: sup attained on the source boundary; gradient range of F "
                    "does not cover the dual box");
            }
            out.at(jx, jy) = best;
        }
    }
    return out;
}

double min_hessian_eigenvalue(const ScalarField& f) {
    const Grid& g = f.grid();
    HessField h = hessian_fd(f);
    double m = std::numeric_limits<double>::infinity();
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            m = std::min(m, sym_min_eigenvalue(h[g.index(ix, iy)], g.dim()));
        }
    }
    return m;
}

ToricBackground::ToricBackground(Grid grid, ScalarField f0)
    : grid_(grid), f0_(std::move(f0)), hess0_(grid) {
    if (!f0_.grid().same_layout(grid_)) {
        throw PreconditionError("background potential does not live on the stated grid");
    }
    if (!f0_.all_finite()) throw PreconditionError("background potential has non-finite values");
    hess0_ = hessian_fd(f0_);
    if (min_hessian_eigenvalue(f0_) <= 0.0) {
        throw PreconditionError("background potential is not strictly convex on the grid");
    }
    volume_ = integrate(ma_density(f0_), Support::interior);
    if (!(volume_ > 0.0)) throw PreconditionError("background volume must be positive");
}

ToricPotential::ToricPotential(std::shared_ptr<const ToricBackground> background, ScalarField phi)
    : background_(std::move(background)), phi_(std::move(phi)) {
    if (!background_) throw PreconditionError("toric potential needs a background");
    if (!phi_.grid().same_layout(background_->grid())) {
        throw PreconditionError("perturbation does not live on the background grid");
    }
    if (!phi_.all_finite()) throw PreconditionError("perturbation has non-finite values");
    if (min_hessian_eigenvalue(total()) <= 0.0) {
        throw PreconditionError("F0 + phi is not strictly convex on the grid");
    }
}

ScalarField ToricPotential::total() const {
    ScalarField out = background_->f0();
    const ScalarField& p = phi_;
    for (int id = 0; id < out.grid().node_count(); ++id) out[id] += p[id];
    return out;
}

}  // namespace maggeo
