#include "maggeo/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "maggeo/errors.hpp"

namespace maggeo {

using nlohmann::json;

namespace {

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("scenario: " + msg); }

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'");
    return *it;
}

Grid parse_grid(const json& j, const char* what) {
    const int dim = require(j, "dim").get<int>();
    const auto points = require(j, "points").get<std::vector<int>>();
    const auto box = require(j, "box").get<std::vector<std::vector<double>>>();
    if (dim != 1 && dim != 2) fail(std::string(what) + ": dim must be 1 or 2");
    if (static_cast<int>(points.size()) != dim || static_cast<int>(box.size()) != dim) {
        fail(std::string(what) + ": points/box length must equal dim");
    }
    std::array<int, 2> p{points[0], dim == 2 ? points[1] : 1};
    std::array<std::array<double, 2>, 2> b{};
    for (int a = 0; a < dim; ++a) {
        if (box[a].size() != 2) fail(std::string(what) + ": each box entry is [lo, hi]");
        b[a] = {box[a][0], box[a][1]};
    }
    try {
        return Grid(dim, p, b);
    } catch (const PreconditionError& e) {
        fail(std::string(what) + ": " + e.what());
    }
}

double radial_sq(const Grid& g, double x, double y) {
    return g.dim() == 1 ? x * x : x * x + y * y;
}

ScalarField parse_field(const json& j, const Grid& grid, const char* what) {
    if (j.contains("values")) {
        auto values = j.at("values").get<std::vector<double>>();
        if (static_cast<int>(values.size()) != grid.node_count()) {
            fail(std::string(what) + ": tabulated values length must match the grid");
        }
        return ScalarField(grid, std::move(values));
    }
    const std::string preset = require(j, "preset").get<std::string>();
    const double amplitude = j.value("amplitude", 1.0);
    if (preset == "zero") {
        return ScalarField(grid);
    }
    if (preset == "quadratic") {
        return ScalarField::sample(grid, [&](double x, double y) {
            return 0.5 * radial_sq(grid, x, y);
        });
    }
    if (preset == "quadratic-bump") {
        return ScalarField::sample(grid, [&](double x, double y) {
            return amplitude * 0.5 * radial_sq(grid, x, y);
        });
    }
    if (preset == "quartic-bump") {
        return ScalarField::sample(grid, [&](double x, double y) {
            const double r2 = radial_sq(grid, x, y);
            return amplitude * r2 * r2 / 12.0;
        });
    }
    if (preset == "compact-bump") {
        const double radius = j.value("radius", 0.5);
        double half = 0.5 * (grid.hi(0) - grid.lo(0));
        if (grid.dim() == 2) half = std::min(half, 0.5 * (grid.hi(1) - grid.lo(1)));
        const double r = radius * half;
        const double cx = 0.5 * (grid.lo(0) + grid.hi(0));
        const double cy = grid.dim() == 2 ? 0.5 * (grid.lo(1) + grid.hi(1)) : 0.0;
        return ScalarField::sample(grid, [&](double x, double y) {
            const double s2 = radial_sq(grid, x - cx, y - cy) / (r * r);
            if (s2 >= 1.0) return 0.0;
            const double w = 1.0 - s2;
            return amplitude * w * w * w * w * w;
        });
    }
    fail(std::string(what) + ": unknown preset '" + preset + "'");
}

int text_line_of_byte(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

SolverConfig Scenario::solver_config() const {
    SolverConfig cfg = solver;
    cfg.lambda_schedule = lambda_schedule;
    cfg.velocity_form = velocity_form;
    cfg.oracle_dual_grid = dual_grid;
    return cfg;
}

Scenario load_scenario_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: ") + e.what(), text_line_of_byte(text, e.byte));
    }
    try {
        Grid grid = parse_grid(require(j, "grid"), "grid");
        TimeAxis time(require(require(j, "time"), "steps").get<int>());

        ScalarField f0 = parse_field(require(j, "background"), grid, "background");
        std::shared_ptr<const ToricBackground> bg;
        try {
            bg = std::make_shared<ToricBackground>(grid, std::move(f0));
        } catch (const PreconditionError& e) {
            fail(std::string("background: ") + e.what());
        }

        Scenario s{bg,
                   parse_field(require(j, "phi0"), grid, "phi0"),
                   parse_field(require(j, "phi1"), grid, "phi1"),
                   time};

        const json& coupling = require(j, "coupling");
        s.lambda_schedule = require(coupling, "lambda_schedule").get<std::vector<double>>();
        const std::string form = coupling.value("velocity_form", "derived");
        if (form == "derived") {
            s.velocity_form = VelocityForm::derived;
        } else if (form == "literal") {
            s.velocity_form = VelocityForm::literal;
        } else {
            fail("coupling: velocity_form must be 'derived' or 'literal'");
        }

        if (j.contains("solver")) {
            const json& sv = j.at("solver");
            s.solver.max_iterations = sv.value("max_iterations", s.solver.max_iterations);
            s.solver.gradient_tolerance =
                sv.value("gradient_tolerance", s.solver.gradient_tolerance);
            s.solver.initial_step = sv.value("initial_step", s.solver.initial_step);
            s.solver.backtracking = sv.value("backtracking", s.solver.backtracking);
            s.solver.armijo = sv.value("armijo", s.solver.armijo);
            s.solver.convexity_margin = sv.value("convexity_margin", s.solver.convexity_margin);
            s.solver.rng_seed = sv.value("rng_seed", s.solver.rng_seed);
            const std::string init = sv.value("initial_path", "linear");
            if (init == "linear") {
                s.solver.initial_path = InitialPathChoice::linear;
            } else if (init == "oracle") {
                s.solver.initial_path = InitialPathChoice::oracle;
            } else {
                fail("solver: initial_path must be 'linear' or 'oracle'");
            }
        }

        if (j.contains("gradcheck")) {
            const json& gc = j.at("gradcheck");
            s.gradcheck_directions = gc.value("directions", 20);
            s.gradcheck_epsilon = gc.value("epsilon", 1e-5);
            if (s.gradcheck_directions < 1) fail("gradcheck: directions must be positive");
        }

        if (j.contains("oracle")) {
            const json& oc = j.at("oracle");
            const int dual_points = require(oc, "dual_points").get<int>();
            const auto dual_box = require(oc, "dual_box").get<std::vector<double>>();
            if (grid.dim() != 1) fail("oracle: only 1-D scenarios carry a dual grid");
            if (dual_box.size() != 2) fail("oracle: dual_box is [lo, hi]");
            s.dual_grid = Grid::line(dual_points, dual_box[0], dual_box[1]);
            s.oracle_tolerance = oc.value("tolerance", 0.0);
        }
        if (s.solver.initial_path == InitialPathChoice::oracle && !s.dual_grid) {
            fail("solver: initial_path 'oracle' needs an oracle section with a dual grid");
        }

        s.output_dir = j.value("output_dir", std::string("out"));

        // Presets must satisfy every module invariant before any run starts.
        try {
            s.potential0();
            s.potential1();
        } catch (const PreconditionError& e) {
            fail(std::string("endpoint potentials: ") + e.what());
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open scenario file '" + file.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

namespace {

PotentialPath initial_path(const Scenario& s) {
    if (s.solver.initial_path == InitialPathChoice::oracle) {
        return oracle_geodesic(s.potential0(), s.potential1(), s.time, *s.dual_grid);
    }
    return PotentialPath::linear_interpolation(s.potential0(), s.potential1(), s.time);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

int run_gradcheck(const Scenario& scenario, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    PotentialPath path = initial_path(scenario);

    json checks = json::array();
    bool all_passed = true;
    int check_index = 0;
    for (double lambda : scenario.lambda_schedule) {
        for (VelocityForm form : {VelocityForm::derived, VelocityForm::literal}) {
            const CouplingConfig cfg{lambda, form};
            json dirs = json::array();
            for (int i = 0; i < scenario.gradcheck_directions; ++i) {
                const std::uint64_t seed =
                    scenario.solver.rng_seed + 1000003ull * check_index + i;
                PathGradient dir = random_direction(path, seed);
                DirectionalCheck c =
                    directional_derivative_check(path, cfg, dir, scenario.gradcheck_epsilon);
                const bool ok = c.rel_error <= 1e-5 || c.abs_error <= 1e-10;
                all_passed = all_passed && ok;
                dirs.push_back({{"direction_index", i},
                                {"analytic", c.analytic},
                                {"numeric", c.numeric},
                                {"rel_error", c.rel_error}});
            }
            checks.push_back({{"lambda", lambda},
                              {"velocity_form", form == VelocityForm::derived ? "derived"
                                                                              : "literal"},
                              {"directions", dirs}});
            ++check_index;
        }
    }
    json report{{"checks", checks}, {"all_passed", all_passed}};
    std::ofstream out(out_dir / "gradcheck.json");
    out << report.dump(2) << "\n";
    return all_passed ? 0 : 1;
}

int run_solve(const Scenario& scenario, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    SolveResult res = solve(scenario.potential0(), scenario.potential1(), scenario.time,
                            scenario.solver_config());

    {
        std::ofstream trace(out_dir / "trace.csv");
        trace << "iter,lambda,lh,grad_linf,min_eig\n";
        for (const TraceRow& r : res.trace) {
            trace << r.iteration << ',' << format17(r.lambda) << ',' << format17(r.lh_value)
                  << ',' << format17(r.grad_linf) << ',' << format17(r.min_eig) << '\n';
        }
    }
    {
        std::ofstream csv(out_dir / "residuals.csv");
        csv << "t_index,geodesic_l2,geodesic_linf,magnetic_derived_l2,magnetic_derived_linf,"
               "magnetic_literal_l2,magnetic_literal_linf,hcma_linf\n";
        for (size_t i = 0; i < res.geodesic.knots.size(); ++i) {
            csv << res.geodesic.knots[i] << ',' << format17(res.geodesic.l2[i]) << ','
                << format17(res.geodesic.linf[i]) << ',' << format17(res.magnetic_derived.l2[i])
                << ',' << format17(res.magnetic_derived.linf[i]) << ','
                << format17(res.magnetic_literal.l2[i]) << ','
                << format17(res.magnetic_literal.linf[i]) << ',' << format17(res.hcma.linf[i])
                << '\n';
        }
    }
    {
        std::vector<double> profile = energy_profile(res.path);
        std::ofstream csv(out_dir / "energy_profile.csv");
        csv << "t_index,energy\n";
        for (size_t i = 0; i < profile.size(); ++i) {
            csv << (i + 1) << ',' << format17(profile[i]) << '\n';
        }
    }
    {
        const Grid& g = res.path.grid();
        json grid_meta{{"dim", g.dim()}};
        json points = json::array();
        json box = json::array();
        for (int a = 0; a < g.dim(); ++a) {
            points.push_back(g.points(a));
            box.push_back({g.lo(a), g.hi(a)});
        }
        grid_meta["points"] = points;
        grid_meta["box"] = box;
        json slices = json::array();
        for (int k = 0; k < res.path.slice_count(); ++k) {
            slices.push_back(res.path.slice(k).values());
        }
        json doc{{"grid", grid_meta},
                 {"time", {{"steps", res.path.time().steps()}}},
                 {"converged", res.converged},
                 {"iterations", res.iterations},
                 {"final_grad_linf", res.final_grad_linf},
                 {"slices", slices}};
        std::ofstream out(out_dir / "path.json");
        out << doc.dump() << "\n";
    }
    if (!(res.min_velocity_eigenvalue > 0.0)) {
        std::fprintf(stderr,
                     "note: some velocity slices are not convex (min eigenvalue %.3g); the "
                     "magnetic density was evaluated algebraically there\n",
                     res.min_velocity_eigenvalue);
    }
    return res.converged ? 0 : 1;
}

int run_oracle_compare(const Scenario& scenario, const std::filesystem::path& out_dir) {
    if (!scenario.dual_grid || scenario.background->grid().dim() != 1) {
        throw ConfigError("oracle-compare needs a 1-D scenario with an oracle section");
    }
    ensure_dir(out_dir);

    PotentialPath oracle =
        oracle_geodesic(scenario.potential0(), scenario.potential1(), scenario.time,
                        *scenario.dual_grid);

    SolverConfig cfg = scenario.solver_config();
    cfg.lambda_schedule = {0.0};
    SolveResult res = solve(scenario.potential0(), scenario.potential1(), scenario.time, cfg);

    double linf = 0.0;
    for (int k = 0; k <= scenario.time.steps(); ++k) {
        const auto& a = res.path.slice(k).values();
        const auto& b = oracle.slice(k).values();
        for (size_t i = 0; i < a.size(); ++i) linf = std::max(linf, std::abs(a[i] - b[i]));
    }

    json report{{"linf_distance", linf},
                {"geodesic_residual_oracle", geodesic_residual(oracle).max_linf},
                {"geodesic_residual_solver", res.geodesic.max_linf},
                {"hcma_residual_oracle", hcma_residual(oracle).max_linf}};
    std::ofstream out(out_dir / "oracle_compare.json");
    out << report.dump(2) << "\n";
    return linf <= scenario.oracle_tolerance ? 0 : 1;
}

}  // namespace maggeo
