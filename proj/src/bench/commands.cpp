#include "sprd/bench.hpp"
#include "sprd/errors.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace sprd::bench {

namespace {

struct HelpRequested {
    std::string text;
};

double epsilon_of(int k) { return std::ldexp(1.0, -k); }

int single_exponent(const RunConfig& config) {
    if (config.eps_exponents.size() != 1) {
        throw ConfigError("this command takes a single --eps-exp value");
    }
    return config.eps_exponents.front();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    file << content;
    if (!file) {
        throw ConfigError("failed writing '" + path + "'");
    }
}

std::string error_title(int example_id, const RunConfig& config) {
    return "Example " + std::to_string(example_id) +
           ": maximum double-mesh errors and rates (" + l_mode_label(config.l_mode) + ")";
}

std::string spectral_title(int example_id, EigenTarget target) {
    return "Example " + std::to_string(example_id) + ": " +
           (target == EigenTarget::largest_real ? "largest real eigenvalue"
                                                : "spectral radius") +
           " of the transition operator";
}

void render_errors(std::ostream& body, const RunConfig& config, int example_id, bool rates_only) {
    const CoupledSystem system = example_system(example_id, 1.0);
    const ErrorTable table =
        build_error_table(system, config.eps_exponents, config.ladder(), config.settings());
    const RateTable rates = convergence_rates(table);
    if (config.format == OutputFormat::csv) {
        write_value_csv(body, rates_only ? rate_rows(table, rates) : error_rows(table));
    } else {
        write_error_table_text(body, error_title(example_id, config), table, rates);
    }
}

void render_spectral(std::ostream& body, const RunConfig& config, int example_id) {
    const CoupledSystem system = example_system(example_id, 1.0);
    const SpectralTable table = build_spectral_table(system, config.eps_exponents, config.ladder(),
                                                     config.settings(), config.rho_target);
    if (config.format == OutputFormat::csv) {
        write_value_csv(body, spectral_rows(table));
    } else {
        write_spectral_table_text(body, spectral_title(example_id, config.rho_target), table);
    }
}

void run_solve(std::ostream& body, const RunConfig& config, std::ostream& err) {
    const CoupledSystem system = example_system(config.example_id, epsilon_of(single_exponent(config)));
    const SolverSettings settings = config.settings();
    const MeshConfig mesh_config = mesh_config_for(system, config.n0, settings);
    const GeneralizedShishkinMesh mesh = build_mesh(mesh_config, system.epsilon());
    const TimeGrid grid = make_time_grid(system.horizon(), config.dt0);

    const PositivityReport report =
        verify_positive_type(mesh, system, config.dt0, mesh_config.sigma0, config.gamma);
    err << report.describe();

    if (config.dump_mesh_path) {
        std::ostringstream dump;
        write_mesh_dump(dump, mesh);
        write_file(*config.dump_mesh_path, dump.str());
    }
    if (config.dump_operator_path) {
        const SchemeOperators ops = build_operators(mesh, system, config.dt0, config.gamma);
        std::ostringstream dump;
        ops.lhs.write_coordinates(dump);
        write_file(*config.dump_operator_path, dump.str());
    }
    IntegrateOptions options;
    options.gamma = config.gamma;
    options.check_recursion = true;
    write_trajectory_csv(body, integrate(system, mesh, grid, options));
}

void run_dump_mesh(std::ostream& body, const RunConfig& config) {
    const CoupledSystem system = example_system(config.example_id, epsilon_of(single_exponent(config)));
    const MeshConfig mesh_config = mesh_config_for(system, config.n0, config.settings());
    write_mesh_dump(body, build_mesh(mesh_config, system.epsilon()));
}

void render(std::ostream& body, const RunConfig& config, std::ostream& err) {
    switch (config.command) {
        case Command::solve:
            run_solve(body, config, err);
            break;
        case Command::dump_mesh:
            run_dump_mesh(body, config);
            break;
        case Command::rates:
            render_errors(body, config, config.example_id, true);
            break;
        case Command::rho:
            render_spectral(body, config, config.example_id);
            break;
        case Command::table: {
            const int example_id = (config.table_id + 1) / 2;
            if (config.table_id % 2 == 1) {
                render_errors(body, config, example_id, false);
            } else {
                render_spectral(body, config, example_id);
            }
            break;
        }
    }
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        std::ostringstream body;
        render(body, config, err);
        if (config.output_path) {
            write_file(*config.output_path, body.str());
        } else {
            out << body.str();
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "numerical failure at node " << e.node() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

RunConfig parse_command_line(int argc, const char* const* argv) {
    RunConfig config;
    CLI::App app{"Coupled singularly perturbed parabolic systems: solver and benchmark tables",
                 "sprd_bench"};
    app.require_subcommand(1);

    std::string eps_text;
    std::string l_mode_text = "lstar";
    std::string format_text = "text";
    std::string rho_text = "real";
    double sigma0 = 0.0;
    std::string out_path;
    std::string mesh_path;
    std::string operator_path;

    const auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--example", config.example_id, "catalog example id (1, 2 or 3)");
        sub->add_option("--eps-exp", eps_text, "eps = 2^-k: k or k1..k2:step");
        sub->add_option("--n", config.n0, "intervals N (first ladder step)");
        sub->add_option("--dt", config.dt0, "time step (first ladder step)");
        sub->add_option("--levels", config.levels, "ladder length");
        sub->add_option("--sigma0", sigma0, "mesh constant (default 4/sqrt(beta*))");
        sub->add_option("--gamma", config.gamma, "compact/central switch constant");
        sub->add_option("--l-mode", l_mode_text, "lstar, lnN or value:<real>");
        sub->add_option("--format", format_text, "csv or text")
            ->check(CLI::IsMember({"csv", "text"}));
        sub->add_option("--out", out_path, "write output to a file");
    };

    CLI::App* solve = app.add_subcommand("solve", "integrate one run and write the trajectory CSV");
    CLI::App* table = app.add_subcommand("table", "regenerate one of tables 1-6");
    CLI::App* rates = app.add_subcommand("rates", "error table rates for one example");
    CLI::App* rho = app.add_subcommand("rho", "transition-operator eigenvalue table for one example");
    CLI::App* dump = app.add_subcommand("dump-mesh", "write the mesh for one (example, eps, N)");
    for (CLI::App* sub : {solve, table, rates, rho, dump}) {
        add_shared(sub);
    }
    solve->add_option("--dump-solution", out_path, "trajectory CSV path (same as --out)");
    solve->add_option("--dump-mesh", mesh_path, "also write the mesh dump");
    solve->add_option("--dump-operator", operator_path, "also write the left-hand operator");
    table->add_option("--id", config.table_id, "table id 1..6")->required();
    for (CLI::App* sub : {table, rho}) {
        sub->add_option("--rho-target", rho_text, "real (largest real eigenvalue) or modulus")
            ->check(CLI::IsMember({"real", "modulus"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    static const std::map<std::string, Command> kCommands = {
        {"solve", Command::solve}, {"table", Command::table}, {"rates", Command::rates},
        {"rho", Command::rho},     {"dump-mesh", Command::dump_mesh}};
    config.command = kCommands.at(chosen->get_name());

    if (!eps_text.empty()) {
        config.eps_exponents = parse_eps_exponents(eps_text);
    } else if (config.command == Command::solve || config.command == Command::dump_mesh) {
        config.eps_exponents = {config.eps_exponents.front()};
    }
    config.l_mode = parse_l_mode(l_mode_text);
    config.format = format_text == "csv" ? OutputFormat::csv : OutputFormat::text;
    config.rho_target = rho_text == "modulus" ? EigenTarget::largest_modulus : EigenTarget::largest_real;
    if (chosen->count("--sigma0") > 0) {
        config.sigma0_override = sigma0;
    }
    if (!out_path.empty()) {
        config.output_path = out_path;
    }
    if (!mesh_path.empty()) {
        config.dump_mesh_path = mesh_path;
    }
    if (!operator_path.empty()) {
        config.dump_operator_path = operator_path;
    }
    return config;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_command_line(argc, argv);
    } catch (const HelpRequested& help) {
        out << help.text;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(config, out, err);
}

}  // namespace sprd::bench
