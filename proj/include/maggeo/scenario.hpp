#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "maggeo/solver.hpp"

namespace maggeo {

/// A fully materialised experiment description: grid, background and
/// endpoint fields (presets resolved and validated), coupling, solver
/// settings, optional dual grid for the oracle, and output location.
struct Scenario {
    std::shared_ptr<const ToricBackground> background;
    ScalarField phi0;
    ScalarField phi1;
    TimeAxis time{2};
    std::vector<double> lambda_schedule{0.0};
    VelocityForm velocity_form = VelocityForm::derived;
    SolverConfig solver;
    std::optional<Grid> dual_grid;
    double oracle_tolerance = 0.0;
    int gradcheck_directions = 20;
    double gradcheck_epsilon = 1e-5;
    std::string output_dir = "out";

    ToricPotential potential0() const { return ToricPotential(background, phi0); }
    ToricPotential potential1() const { return ToricPotential(background, phi1); }
    SolverConfig solver_config() const;
};

/// Parse and validate a scenario file. Throws ConfigError with a 1-based
/// line number for malformed JSON, and without one for semantic errors.
Scenario load_scenario(const std::filesystem::path& file);
Scenario load_scenario_text(const std::string& text);

/// Finite-difference check of the functional gradient on the scenario's
/// initial path, both velocity forms, every schedule lambda. Writes
/// gradcheck.json into the output directory; returns 0 when every
/// direction passes (relative error <= 1e-5, or absolute <= 1e-10 near
/// stationary points).
int run_gradcheck(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Full solve; writes trace.csv, residuals.csv, energy_profile.csv and
/// path.json. Returns 0 iff every lambda stage converged.
int run_solve(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Oracle/solver comparison at lambda = 0 (1-D scenarios with a dual
/// grid). Writes oracle_compare.json; returns 0 iff the sup distance is
/// within the scenario tolerance.
int run_oracle_compare(const Scenario& scenario, const std::filesystem::path& out_dir);

}  // namespace maggeo
