#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maggeo/errors.hpp"
#include "maggeo/scenario.hpp"

namespace py = pybind11;
using namespace maggeo;

namespace {

Grid make_grid(int dim, std::vector<int> points, std::vector<std::pair<double, double>> box) {
    if (static_cast<int>(points.size()) != dim || static_cast<int>(box.size()) != dim) {
        throw PreconditionError("points/box length must equal dim");
    }
    std::array<int, 2> p{points[0], dim == 2 ? points[1] : 1};
    std::array<std::array<double, 2>, 2> b{};
    for (int a = 0; a < dim; ++a) b[a] = {box[a].first, box[a].second};
    return Grid(dim, p, b);
}

py::dict report_dict(const ResidualReport& r) {
    py::dict d;
    d["knots"] = r.knots;
    d["l2"] = r.l2;
    d["linf"] = r.linf;
    d["max_l2"] = r.max_l2;
    d["max_linf"] = r.max_linf;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Variational magnetic-geodesic solver on toric potential grids";

    py::register_exception<PreconditionError>(m, "PreconditionError");
    py::register_exception<RangeCoverageError>(m, "RangeCoverageError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::enum_<Support>(m, "Support")
        .value("interior", Support::interior)
        .value("full", Support::full);

    py::enum_<VelocityForm>(m, "VelocityForm")
        .value("derived", VelocityForm::derived)
        .value("literal", VelocityForm::literal);

    py::class_<Grid>(m, "Grid")
        .def(py::init(&make_grid), py::arg("dim"), py::arg("points"), py::arg("box"))
        .def_property_readonly("dim", &Grid::dim)
        .def("points", &Grid::points)
        .def("spacing", &Grid::spacing)
        .def("lo", &Grid::lo)
        .def("hi", &Grid::hi)
        .def("coord", &Grid::coord)
        .def("node_count", &Grid::node_count);

    py::class_<ScalarField>(m, "ScalarField")
        .def(py::init<const Grid&, std::vector<double>>(), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &ScalarField::grid)
        .def("values", [](const ScalarField& f) { return f.values(); });

    py::class_<TimeAxis>(m, "TimeAxis")
        .def(py::init<int>(), py::arg("steps"))
        .def_property_readonly("steps", &TimeAxis::steps)
        .def_property_readonly("tau", &TimeAxis::tau)
        .def("knot", &TimeAxis::knot);

    py::class_<ToricBackground, std::shared_ptr<ToricBackground>>(m, "ToricBackground")
        .def(py::init<Grid, ScalarField>(), py::arg("grid"), py::arg("f0"))
        .def_property_readonly("volume", &ToricBackground::volume)
        .def_property_readonly("f0", &ToricBackground::f0);

    py::class_<ToricPotential>(m, "ToricPotential")
        .def(py::init([](std::shared_ptr<ToricBackground> bg, ScalarField phi) {
                 return ToricPotential(std::move(bg), std::move(phi));
             }),
             py::arg("background"), py::arg("phi"))
        .def_property_readonly("phi", &ToricPotential::phi)
        .def("total", &ToricPotential::total);

    py::class_<PotentialPath>(m, "PotentialPath")
        .def_static("linear_interpolation", &PotentialPath::linear_interpolation,
                    py::arg("phi0"), py::arg("phi1"), py::arg("time"))
        .def_static("constant", &PotentialPath::constant, py::arg("phi0"), py::arg("time"))
        .def("slice", [](const PotentialPath& p, int k) { return p.slice(k).values(); })
        .def("slice_count", &PotentialPath::slice_count)
        .def("min_hessian_eigenvalue", &PotentialPath::min_hessian_eigenvalue);

    py::class_<CouplingConfig>(m, "CouplingConfig")
        .def(py::init([](double lambda, VelocityForm form) {
                 return CouplingConfig{lambda, form};
             }),
             py::arg("lambda_") = 1.0, py::arg("velocity_form") = VelocityForm::derived)
        .def_readwrite("lambda_", &CouplingConfig::lambda)
        .def_readwrite("velocity_form", &CouplingConfig::velocity_form);

    m.def("gradient_fd", [](const ScalarField& f) {
        VectorField v = gradient_fd(f);
        const Grid& g = f.grid();
        std::vector<std::vector<double>> out;
        for (int id = 0; id < g.node_count(); ++id) {
            out.push_back({v[id][0], v[id][1]});
        }
        return out;
    });
    m.def("hessian_fd", [](const ScalarField& f) {
        HessField h = hessian_fd(f);
        const Grid& g = f.grid();
        std::vector<std::vector<double>> out;
        for (int id = 0; id < g.node_count(); ++id) {
            out.push_back({h[id].xx, h[id].xy, h[id].yy});
        }
        return out;
    });
    m.def("integrate", &integrate, py::arg("field"), py::arg("support") = Support::interior);
    m.def("ma_density", &ma_density);
    m.def(
        "mixed_ma_density",
        [](std::vector<ScalarField> slots) {
            return mixed_ma_density(std::span<const ScalarField>(slots));
        },
        py::arg("slots"));
    m.def(
        "cofactor_pairing",
        [](const ScalarField& u, const ScalarField& v, std::vector<ScalarField> slots) {
            return cofactor_pairing(u, v, std::span<const ScalarField>(slots));
        },
        py::arg("u"), py::arg("v"), py::arg("slots"));
    m.def("legendre", &legendre, py::arg("f"), py::arg("dual_grid"));
    m.def("time_derivative", &time_derivative, py::arg("path"), py::arg("k"), py::arg("order"));

    m.def("energy", &energy);
    m.def("magnetic_term", &magnetic_term, py::arg("path"), py::arg("config"));
    m.def("landau_hall", &landau_hall, py::arg("path"), py::arg("config"));
    m.def(
        "landau_hall_gradient",
        [](const PotentialPath& p, const CouplingConfig& cfg) {
            PathGradient g = landau_hall_gradient(p, cfg);
            std::vector<std::vector<double>> out;
            for (const ScalarField& s : g.slices) out.push_back(s.values());
            return out;
        },
        py::arg("path"), py::arg("config"));

    m.def("geodesic_residual",
          [](const PotentialPath& p) { return report_dict(geodesic_residual(p)); });
    m.def("magnetic_residual", [](const PotentialPath& p, const CouplingConfig& cfg) {
        return report_dict(magnetic_residual(p, cfg));
    });
    m.def("hcma_residual", [](const PotentialPath& p) { return report_dict(hcma_residual(p)); });
    m.def("energy_profile", &energy_profile);

    m.def("oracle_geodesic", &oracle_geodesic, py::arg("phi0"), py::arg("phi1"), py::arg("time"),
          py::arg("dual_grid"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SolverConfig::max_iterations)
        .def_readwrite("gradient_tolerance", &SolverConfig::gradient_tolerance)
        .def_readwrite("initial_step", &SolverConfig::initial_step)
        .def_readwrite("backtracking", &SolverConfig::backtracking)
        .def_readwrite("armijo", &SolverConfig::armijo)
        .def_readwrite("convexity_margin", &SolverConfig::convexity_margin)
        .def_readwrite("lambda_schedule", &SolverConfig::lambda_schedule)
        .def_readwrite("velocity_form", &SolverConfig::velocity_form)
        .def_readwrite("rng_seed", &SolverConfig::rng_seed);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("final_grad_linf", &SolveResult::final_grad_linf)
        .def_property_readonly("path", [](const SolveResult& r) { return r.path; })
        .def_property_readonly("geodesic",
                               [](const SolveResult& r) { return report_dict(r.geodesic); })
        .def_property_readonly(
            "magnetic_derived",
            [](const SolveResult& r) { return report_dict(r.magnetic_derived); })
        .def_property_readonly(
            "magnetic_literal",
            [](const SolveResult& r) { return report_dict(r.magnetic_literal); })
        .def_property_readonly("hcma", [](const SolveResult& r) { return report_dict(r.hcma); });

    m.def("solve", &solve, py::arg("phi0"), py::arg("phi1"), py::arg("time"), py::arg("config"));
}
