#include <doctest.h>

#include <cmath>
#include <random>

#include "maggeo/errors.hpp"
#include "maggeo/ma_ops.hpp"
#include "maggeo/path.hpp"

using namespace maggeo;

namespace {

double max_interior_error(const ScalarField& got, const std::function<double(double, double)>& ref) {
    const Grid& g = got.grid();
    double m = 0.0;
    for (int ix = 1; ix < g.points(0) - 1; ++ix) {
        const int ylo = g.dim() == 2 ? 1 : 0;
        const int yhi = g.dim() == 2 ? g.points(1) - 1 : 1;
        for (int iy = ylo; iy < yhi; ++iy) {
            const double x = g.coord(0, ix);
            const double y = g.dim() == 2 ? g.coord(1, iy) : 0.0;
            m = std::max(m, std::abs(got.at(ix, iy) - ref(x, y)));
        }
    }
    return m;
}

/// Tent with kinks at c-k, c, c+k (node indices); vanishes outside.
ScalarField tent(const Grid& g, int cx, int cy, int halfwidth) {
    ScalarField out(g);
    for (int ix = 0; ix < g.points(0); ++ix) {
        for (int iy = 0; iy < g.points(1); ++iy) {
            double v = std::max(0.0, 1.0 - std::abs(ix - cx) / double(halfwidth));
            if (g.dim() == 2) {
                v *= std::max(0.0, 1.0 - std::abs(iy - cy) / double(halfwidth));
            }
            out.at(ix, iy) = v;
        }
    }
    return out;
}

double ibp_defect(const ScalarField& u, const ScalarField& v) {
    const Grid& g = u.grid();
    ScalarField lap = laplacian_fd(v);
    VectorField du = gradient_fd(u);
    VectorField dv = gradient_fd(v);
    ScalarField a(g), b(g);
    for (int id = 0; id < g.node_count(); ++id) {
        a[id] = u[id] * lap[id];
        b[id] = du[id][0] * dv[id][0] + du[id][1] * dv[id][1];
    }
    return integrate(a, Support::interior) + integrate(b, Support::interior);
}

}  // namespace

TEST_CASE("central gradient is exact on low-degree polynomials") {
    Grid g1 = Grid::line(33, -2.0, 2.0);
    ScalarField lin = ScalarField::sample(g1, [](double x, double) { return x; });
    VectorField grad = gradient_fd(lin);
    for (int ix = 1; ix < g1.points(0) - 1; ++ix) {
        CHECK(grad[g1.index(ix)][0] == doctest::Approx(1.0).epsilon(1e-14));
    }

    Grid g2 = Grid::rect({17, 17}, {-2.0, -2.0}, {2.0, 2.0});
    ScalarField quad = ScalarField::sample(g2, [](double x, double) { return 0.5 * x * x; });
    VectorField grad2 = gradient_fd(quad);
    for (int ix = 1; ix < 16; ++ix) {
        for (int iy = 1; iy < 16; ++iy) {
            CHECK(grad2[g2.index(ix, iy)][0] ==
                  doctest::Approx(g2.coord(0, ix)).epsilon(1e-13));
            CHECK(grad2[g2.index(ix, iy)][1] == doctest::Approx(0.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("central gradient converges at second order on sin") {
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int points = 65 << i;
        Grid g = Grid::line(points, -M_PI, M_PI);
        ScalarField f = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
        VectorField grad = gradient_fd(f);
        double err = 0.0;
        for (int ix = 1; ix < points - 1; ++ix) {
            err = std::max(err, std::abs(grad[g.index(ix)][0] - std::cos(g.coord(0, ix))));
        }
        const double h = g.spacing(0);
        CHECK(err <= 0.5 * h * h);  // |sin'''| <= 1, so C = 1/6 with headroom
        if (i > 0) CHECK(prev / err >= std::pow(2.0, 1.9));
        prev = err;
    }
}

TEST_CASE("hessian stencils are exact on quadratics") {
    Grid g1 = Grid::line(33, -2.0, 2.0);
    ScalarField f1 = ScalarField::sample(g1, [](double x, double) { return 0.5 * x * x; });
    HessField h1 = hessian_fd(f1);
    for (int ix = 1; ix < 32; ++ix) {
        CHECK(h1[g1.index(ix)].xx == doctest::Approx(1.0).epsilon(1e-12));
    }

    Grid g2 = Grid::rect({17, 17}, {-2.0, -2.0}, {2.0, 2.0});
    ScalarField f2 = ScalarField::sample(
        g2, [](double x, double y) { return 0.5 * x * x + x * y + y * y; });
    HessField h2 = hessian_fd(f2);
    for (int ix = 1; ix < 16; ++ix) {
        for (int iy = 1; iy < 16; ++iy) {
            const Sym& s = h2[g2.index(ix, iy)];
            CHECK(s.xx == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.xy == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.yy == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("hessian converges at second order on sin") {
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int points = 65 << i;
        Grid g = Grid::line(points, -M_PI, M_PI);
        ScalarField f = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
        HessField h = hessian_fd(f);
        double err = 0.0;
        for (int ix = 1; ix < points - 1; ++ix) {
            err = std::max(err, std::abs(h[g.index(ix)].xx + std::sin(g.coord(0, ix))));
        }
        if (i > 0) CHECK(prev / err >= std::pow(2.0, 1.9));
        prev = err;
    }
}

TEST_CASE("gradient and hessian are exact on random degree-2 polynomials") {
    std::mt19937_64 rng(7);
    auto coeff = [&rng]() { return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0; };
    Grid g = Grid::rect({17, 17}, {-1.0, -1.0}, {1.0, 1.0});
    for (int trial = 0; trial < 5; ++trial) {
        const double a = coeff(), bx = coeff(), by = coeff(), cxx = coeff(), cxy = coeff(),
                     cyy = coeff();
        ScalarField f = ScalarField::sample(g, [&](double x, double y) {
            return a + bx * x + by * y + cxx * x * x + cxy * x * y + cyy * y * y;
        });
        VectorField grad = gradient_fd(f);
        HessField hess = hessian_fd(f);
        for (int ix = 1; ix < 16; ++ix) {
            for (int iy = 1; iy < 16; ++iy) {
                const double x = g.coord(0, ix), y = g.coord(1, iy);
                const int id = g.index(ix, iy);
                CHECK(grad[id][0] == doctest::Approx(bx + 2 * cxx * x + cxy * y).epsilon(1e-11));
                CHECK(grad[id][1] == doctest::Approx(by + cxy * x + 2 * cyy * y).epsilon(1e-11));
                CHECK(hess[id].xx == doctest::Approx(2 * cxx).epsilon(1e-10));
                CHECK(hess[id].xy == doctest::Approx(cxy).epsilon(1e-10));
                CHECK(hess[id].yy == doctest::Approx(2 * cyy).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("trapezoid integration: constants exact, x^2 at second order") {
    Grid g1 = Grid::line(33, 0.0, 1.0);
    ScalarField one1(g1, 1.0);
    CHECK(integrate(one1, Support::full) == doctest::Approx(1.0).epsilon(1e-14));

    Grid g2 = Grid::rect({17, 17}, {0.0, 0.0}, {1.0, 1.0});
    ScalarField one2(g2, 1.0);
    CHECK(integrate(one2, Support::full) == doctest::Approx(1.0).epsilon(1e-14));

    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int points = 65 << i;
        Grid g = Grid::line(points, 0.0, 1.0);
        ScalarField f = ScalarField::sample(g, [](double x, double) { return x * x; });
        const double err = std::abs(integrate(f, Support::full) - 1.0 / 3.0);
        if (i == 0) CHECK(err <= 1e-3);
        if (i > 0) CHECK(prev / err >= 3.5);
        prev = err;
    }
}

TEST_CASE("integration of a nonnegative field is nonnegative") {
    std::mt19937_64 rng(11);
    Grid g = Grid::rect({9, 9}, {0.0, 0.0}, {1.0, 1.0});
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField f(g);
        for (int id = 0; id < g.node_count(); ++id) f[id] = (rng() >> 11) * 0x1.0p-53;
        CHECK(integrate(f, Support::interior) >= 0.0);
        CHECK(integrate(f, Support::full) >= 0.0);
    }
}

TEST_CASE("discrete integration by parts cancels exactly for offset tents") {
    Grid g1 = Grid::line(33, 0.0, 1.0);
    ScalarField u1 = tent(g1, 12, 0, 4);
    ScalarField v1 = tent(g1, 13, 0, 4);
    ScalarField lap = laplacian_fd(v1);
    VectorField du = gradient_fd(u1);
    VectorField dv = gradient_fd(v1);
    ScalarField a(g1), b(g1);
    for (int id = 0; id < g1.node_count(); ++id) {
        a[id] = u1[id] * lap[id];
        b[id] = du[id][0] * dv[id][0];
    }
    const double lhs = integrate(a, Support::interior);
    const double rhs = -integrate(b, Support::interior);
    CHECK(lhs != 0.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));

    Grid g2 = Grid::rect({33, 33}, {0.0, 0.0}, {1.0, 1.0});
    ScalarField u2 = tent(g2, 12, 12, 4);
    ScalarField v2 = tent(g2, 13, 13, 4);
    const double defect = ibp_defect(u2, v2);
    ScalarField prod(g2);
    VectorField du2 = gradient_fd(u2), dv2 = gradient_fd(v2);
    for (int id = 0; id < g2.node_count(); ++id) {
        prod[id] = du2[id][0] * dv2[id][0] + du2[id][1] * dv2[id][1];
    }
    const double scale = std::abs(integrate(prod, Support::interior));
    CHECK(scale > 0.0);
    CHECK(std::abs(defect) <= 1e-12 * scale);
}

TEST_CASE("discrete integration by parts is O(h^2) for smooth bumps") {
    double prev = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int points = 33 << i;
        Grid g = Grid::line(points, -1.0, 1.0);
        ScalarField u = ScalarField::sample(g, [](double x, double) {
            const double s = x / 0.5;
            return std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 5) : 0.0;
        });
        ScalarField v = ScalarField::sample(g, [](double x, double) {
            const double s = (x - 0.1) / 0.5;
            return std::abs(s) < 1.0 ? std::pow(1.0 - s * s, 5) : 0.0;
        });
        const double defect = std::abs(ibp_defect(u, v));
        if (i > 0) CHECK(prev / defect >= 3.0);
        prev = defect;
    }
}

TEST_CASE("time derivatives: exact stencils and endpoint errors") {
    Grid g = Grid::line(33, -2.0, 2.0);
    auto bg = std::make_shared<ToricBackground>(
        g, ScalarField::sample(g, [](double x, double) { return 0.5 * x * x; }));
    TimeAxis time(8);
    const double c = 0.5;

    std::vector<ScalarField> linear_slices, quadratic_slices;
    for (int k = 0; k <= time.steps(); ++k) {
        const double t = time.knot(k);
        linear_slices.emplace_back(g, c * t);
        quadratic_slices.emplace_back(g, t * t);
    }
    PotentialPath linear(bg, time, linear_slices);
    PotentialPath quadratic(bg, time, quadratic_slices);

    for (int k = 1; k < time.steps(); ++k) {
        ScalarField d1 = time_derivative(linear, k, 1);
        ScalarField d2 = time_derivative(linear, k, 2);
        ScalarField q2 = time_derivative(quadratic, k, 2);
        for (int id = 0; id < g.node_count(); ++id) {
            CHECK(d1[id] == c);
            CHECK(d2[id] == 0.0);
            CHECK(q2[id] == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(time_derivative(linear, 0, 1), PreconditionError);
    CHECK_THROWS_AS(time_derivative(linear, time.steps(), 2), PreconditionError);
}

TEST_CASE("second time stencil satisfies the composition identity") {
    // Applying the first-order stencil twice gives the wide stencil,
    // which equals the (1,2,1)/4 average of neighbouring 3-point stencils.
    Grid g = Grid::line(17, -2.0, 2.0);
    auto bg = std::make_shared<ToricBackground>(
        g, ScalarField::sample(g, [](double x, double) { return 0.5 * x * x; }));
    TimeAxis time(8);
    std::mt19937_64 rng(3);
    std::vector<ScalarField> slices;
    for (int k = 0; k <= time.steps(); ++k) {
        ScalarField s(g);
        const double amp = 0.05 * ((rng() >> 11) * 0x1.0p-53);
        for (int ix = 0; ix < g.points(0); ++ix) {
            const double x = g.coord(0, ix);
            s.at(ix) = amp * x * x;
        }
        slices.push_back(std::move(s));
    }
    PotentialPath path(bg, time, slices);

    const double tau = time.tau();
    for (int k = 2; k < time.steps() - 1; ++k) {
        ScalarField dot_prev = time_derivative(path, k - 1, 1);
        ScalarField dot_next = time_derivative(path, k + 1, 1);
        ScalarField dd_prev = time_derivative(path, k - 1, 2);
        ScalarField dd_mid = time_derivative(path, k, 2);
        ScalarField dd_next = time_derivative(path, k + 1, 2);
        for (int id = 0; id < g.node_count(); ++id) {
            const double composed = (dot_next[id] - dot_prev[id]) / (2.0 * tau);
            const double averaged =
                0.25 * (dd_prev[id] + 2.0 * dd_mid[id] + dd_next[id]);
            CHECK(composed == doctest::Approx(averaged).epsilon(1e-12));
        }
    }
}

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(Grid::line(4, 0.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(Grid::line(9, 1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(Grid(3, {9, 9}, {{{0, 1}, {0, 1}}}), PreconditionError);
    Grid g = Grid::line(9, 0.0, 1.0);
    CHECK(g.spacing(0) == doctest::Approx(0.125));
    CHECK(g.coord(0, 8) == doctest::Approx(1.0));
}
