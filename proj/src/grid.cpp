#include "maggeo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maggeo/errors.hpp"

namespace maggeo {

Grid::Grid(int dim, std::array<int, 2> points, std::array<std::array<double, 2>, 2> box)
    : dim_(dim), points_(points), box_(box) {
    if (dim != 1 && dim != 2) {
        throw PreconditionError("grid dimension must be 1 or 2");
    }
    if (dim == 1) {
        points_[1] = 1;
        box_[1] = {0.0, 0.0};
    }
    for (int a = 0; a < dim_; ++a) {
        if (points_[a] < 5) {
            throw PreconditionError("grid needs at least 5 points per axis");
        }
        if (!(box_[a][1] > box_[a][0])) {
            throw PreconditionError("grid box must have positive extent");
        }
        spacing_[a] = (box_[a][1] - box_[a][0]) / (points_[a] - 1);
    }
    if (dim_ == 1) spacing_[1] = 0.0;
}

Grid Grid::line(int points, double lo, double hi) {
    return Grid(1, {points, 1}, {{{lo, hi}, {0.0, 0.0}}});
}

Grid Grid::rect(std::array<int, 2> points, std::array<double, 2> lo, std::array<double, 2> hi) {
    return Grid(2, points, {{{lo[0], hi[0]}, {lo[1], hi[1]}}});
}

int Grid::depth(int ix, int iy) const {
    int d = std::min(ix, points_[0] - 1 - ix);
    if (dim_ == 2) d = std::min(d, std::min(iy, points_[1] - 1 - iy));
    return d;
}

bool Grid::same_layout(const Grid& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && box_ == other.box_;
}

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), v_(static_cast<size_t>(grid.node_count()), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values)) {
    if (v_.size() != static_cast<size_t>(grid_.node_count())) {
        throw PreconditionError("scalar field length does not match grid node count");
    }
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int ix = 0; ix < grid.points(0); ++ix) {
        for (int iy = 0; iy < grid.points(1); ++iy) {
            out.at(ix, iy) = f(grid.coord(0, ix), grid.dim() == 2 ? grid.coord(1, iy) : 0.0);
        }
    }
    return out;
}

bool ScalarField::all_finite() const {
    for (double x : v_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

VectorField::VectorField(const Grid& grid)
    : grid_(grid), v_(static_cast<size_t>(grid.node_count()), {0.0, 0.0}) {}

HessField::HessField(const Grid& grid)
    : grid_(grid), h_(static_cast<size_t>(grid.node_count())) {}

TimeAxis::TimeAxis(int steps) : steps_(steps) {
    if (steps < 2) throw PreconditionError("time axis needs at least 2 steps");
}

VectorField gradient_fd(const ScalarField& f) {
    const Grid& g = f.grid();
    VectorField out(g);
    const double ihx = 1.0 / (2.0 * g.spacing(0));
    const double ihy = g.dim() == 2 ? 1.0 / (2.0 * g.spacing(1)) : 0.0;
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            auto& v = out[g.index(ix, iy)];
            v[0] = (f.at(ix + 1, iy) - f.at(ix - 1, iy)) * ihx;
            if (g.dim() == 2) {
                v[1] = (f.at(ix, iy + 1) - f.at(ix, iy - 1)) * ihy;
            }
        }
    }
    return out;
}

HessField hessian_fd(const ScalarField& f) {
    const Grid& g = f.grid();
    HessField out(g);
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    const double ihy2 = g.dim() == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
    const double ihxy = g.dim() == 2 ? 1.0 / (4.0 * g.spacing(0) * g.spacing(1)) : 0.0;
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            Sym& s = out[g.index(ix, iy)];
            s.xx = (f.at(ix + 1, iy) - 2.0 * f.at(ix, iy) + f.at(ix - 1, iy)) * ihx2;
            if (g.dim() == 2) {
                s.yy = (f.at(ix, iy + 1) - 2.0 * f.at(ix, iy) + f.at(ix, iy - 1)) * ihy2;
                s.xy = (f.at(ix + 1, iy + 1) - f.at(ix + 1, iy - 1) -
                        f.at(ix - 1, iy + 1) + f.at(ix - 1, iy - 1)) *
                       ihxy;
            }
        }
    }
    return out;
}

ScalarField laplacian_fd(const ScalarField& f) {
    HessField h = hessian_fd(f);
    ScalarField out(f.grid());
    const Grid& g = f.grid();
    for (int id = 0; id < g.node_count(); ++id) {
        out[id] = h[id].xx + h[id].yy;
    }
    return out;
}

namespace {

double axis_weight(int k, int points, double h, Support support) {
    const int lo = support == Support::full ? 0 : 1;
    const int hi = support == Support::full ? points - 1 : points - 2;
    if (k < lo || k > hi) return 0.0;
    return (k == lo || k == hi) ? 0.5 * h : h;
}

}  // namespace

double quad_weight(const Grid& grid, int ix, int iy, Support support) {
    double w = axis_weight(ix, grid.points(0), grid.spacing(0), support);
    if (grid.dim() == 2) {
        w *= axis_weight(iy, grid.points(1), grid.spacing(1), support);
    }
    return w;
}

double integrate(const ScalarField& f, Support support) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (int ix = 0; ix < g.points(0); ++ix) {
        const double wx = axis_weight(ix, g.points(0), g.spacing(0), support);
        if (wx == 0.0) continue;
        if (g.dim() == 1) {
            acc += wx * f.at(ix);
            continue;
        }
        double row = 0.0;
        for (int iy = 0; iy < g.points(1); ++iy) {
            const double wy = axis_weight(iy, g.points(1), g.spacing(1), support);
            if (wy == 0.0) continue;
            row += wy * f.at(ix, iy);
        }
        acc += wx * row;
    }
    return acc;
}

}  // namespace maggeo
