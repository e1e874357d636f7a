#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace maggeo {

enum class Support { interior, full };

/// Uniform tensor-product grid on a box in R^n, n in {1,2}.
/// Axis i carries points(i) nodes at lo(i) + k*spacing(i).
/// Interior nodes are those with at least one neighbour layer on every
/// side, so all central stencils are defined there without one-sided
/// formulas.
class Grid {
public:
    Grid(int dim, std::array<int, 2> points, std::array<std::array<double, 2>, 2> box);

    static Grid line(int points, double lo, double hi);
    static Grid rect(std::array<int, 2> points, std::array<double, 2> lo, std::array<double, 2> hi);

    int dim() const { return dim_; }
    int points(int axis) const { return points_[axis]; }
    double lo(int axis) const { return box_[axis][0]; }
    double hi(int axis) const { return box_[axis][1]; }
    double spacing(int axis) const { return spacing_[axis]; }
    int node_count() const { return points_[0] * points_[1]; }

    int index(int ix, int iy = 0) const { return ix * points_[1] + iy; }
    double coord(int axis, int k) const { return box_[axis][0] + k * spacing_[axis]; }

    /// Distance (in layers) to the nearest face of the box.
    int depth(int ix, int iy = 0) const;
    bool is_interior(int ix, int iy = 0) const { return depth(ix, iy) >= 1; }

    bool same_layout(const Grid& other) const;

private:
    int dim_;
    std::array<int, 2> points_;           // points_[1] == 1 for dim 1
    std::array<std::array<double, 2>, 2> box_;
    std::array<double, 2> spacing_;
};

/// Per-node real values on a grid.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double fill = 0.0);
    ScalarField(const Grid& grid, std::vector<double> values);

    /// Sample f(x) (dim 1) or f(x, y) (dim 2) at every node.
    static ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    double& operator[](int id) { return v_[id]; }
    double operator[](int id) const { return v_[id]; }
    double& at(int ix, int iy = 0) { return v_[grid_.index(ix, iy)]; }
    double at(int ix, int iy = 0) const { return v_[grid_.index(ix, iy)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> v_;
};

/// Symmetric n x n matrix for n <= 2. For dim 1 only xx is meaningful.
struct Sym {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// One length-n vector per interior node (boundary entries stay zero).
class VectorField {
public:
    explicit VectorField(const Grid& grid);
    const Grid& grid() const { return grid_; }
    std::array<double, 2>& operator[](int id) { return v_[id]; }
    const std::array<double, 2>& operator[](int id) const { return v_[id]; }

private:
    Grid grid_;
    std::vector<std::array<double, 2>> v_;
};

/// One symmetric matrix per interior node; mixed partials use the
/// symmetric cross stencil so symmetry holds by construction.
class HessField {
public:
    explicit HessField(const Grid& grid);
    const Grid& grid() const { return grid_; }
    Sym& operator[](int id) { return h_[id]; }
    const Sym& operator[](int id) const { return h_[id]; }

private:
    Grid grid_;
    std::vector<Sym> h_;
};

/// Uniform partition of [0,1] into `steps` intervals, knots t_k = k/steps.
class TimeAxis {
public:
    explicit TimeAxis(int steps);
    int steps() const { return steps_; }
    double tau() const { return 1.0 / steps_; }
    double knot(int k) const { return static_cast<double>(k) / steps_; }

private:
    int steps_;
};

VectorField gradient_fd(const ScalarField& f);
HessField hessian_fd(const ScalarField& f);

/// Trace of hessian_fd; defined at interior nodes.
ScalarField laplacian_fd(const ScalarField& f);

/// Tensor-product trapezoid rule over the chosen node set.
double integrate(const ScalarField& f, Support support);

/// Trapezoid weight of a single node for the chosen node set (zero for
/// nodes outside the set).
double quad_weight(const Grid& grid, int ix, int iy, Support support);

}  // namespace maggeo
