#include <cstdio>
#include <exception>
#include <string>

#include "maggeo/errors.hpp"
#include "maggeo/scenario.hpp"

namespace {

void print_usage() {
    std::fprintf(stderr,
                 "usage: maggeo <gradcheck|solve|oracle-compare> <config.json> [--out DIR]\n"
                 "\n"
                 "exit codes: 0 success, 1 run failure (not converged / tolerance missed),\n"
                 "            2 config error, 3 solver precondition, 4 oracle precondition\n");
}

}  // namespace

int main(int argc, char** argv) {
    std::string subcommand, config, out_override;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out") {
            if (i + 1 >= argc) {
                print_usage();
                return 2;
            }
            out_override = argv[++i];
        } else if (arg == "--help" || arg == "-h") {
            print_usage();
            return 0;
        } else if (subcommand.empty()) {
            subcommand = arg;
        } else if (config.empty()) {
            config = arg;
        } else {
            std::fprintf(stderr, "unexpected argument '%s'\n", arg.c_str());
            print_usage();
            return 2;
        }
    }
    if (subcommand.empty() || config.empty()) {
        print_usage();
        return 2;
    }

    try {
        maggeo::Scenario scenario = maggeo::load_scenario(config);
        const std::filesystem::path out =
            out_override.empty() ? scenario.output_dir : out_override;
        if (subcommand == "gradcheck") {
            return maggeo::run_gradcheck(scenario, out);
        }
        if (subcommand == "solve") {
            return maggeo::run_solve(scenario, out);
        }
        if (subcommand == "oracle-compare") {
            return maggeo::run_oracle_compare(scenario, out);
        }
        std::fprintf(stderr, "unknown subcommand '%s'\n", subcommand.c_str());
        print_usage();
        return 2;
    } catch (const maggeo::ConfigError& e) {
        if (e.line() > 0) {
            std::fprintf(stderr, "config error (line %d): %s\n", e.line(), e.what());
        } else {
            std::fprintf(stderr, "config error: %s\n", e.what());
        }
        return 2;
    } catch (const maggeo::RangeCoverageError& e) {
        std::fprintf(stderr, "oracle precondition: %s\n", e.what());
        return 4;
    } catch (const maggeo::PreconditionError& e) {
        std::fprintf(stderr, "precondition: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
