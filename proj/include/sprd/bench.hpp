#pragma once

#include "sprd/cn_stepper.hpp"
#include "sprd/robustness_analysis.hpp"
#include "sprd/shishkin_mesh.hpp"
#include "sprd/system_catalog.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sprd::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

enum class Command { solve, table, rates, rho, dump_mesh };
enum class OutputFormat { csv, text };

struct RunConfig {
    Command command = Command::table;
    int example_id = 1;
    int table_id = 1;
    std::vector<int> eps_exponents = {4, 8, 12, 16, 20, 24, 28, 32};
    int n0 = 64;
    double dt0 = 0.5;
    int levels = 5;
    std::optional<double> sigma0_override;
    double gamma = kDefaultGamma;
    LMode l_mode = LStar{};
    OutputFormat format = OutputFormat::text;
    std::optional<std::string> output_path;
    EigenTarget rho_target = EigenTarget::largest_real;
    std::optional<std::string> dump_mesh_path;
    std::optional<std::string> dump_operator_path;

    [[nodiscard]] SolverSettings settings() const;
    [[nodiscard]] std::vector<LadderStep> ladder() const;
};

/// "k" or "k1..k2:step" (step defaults to 1).
[[nodiscard]] std::vector<int> parse_eps_exponents(std::string_view text);
/// "lstar", "lnN" or "value:<real>".
[[nodiscard]] LMode parse_l_mode(std::string_view text);
[[nodiscard]] std::string l_mode_label(const LMode& mode);

/// Checks ladder divisibility and T/dt integrality; throws ConfigError.
void validate(const RunConfig& config);

/// Catalog example with epsilon set; id 0 is the zero-source system.
[[nodiscard]] CoupledSystem example_system(int id, double epsilon);

// --- value CSV: eps_exp,N,dt,value -------------------------------------------

struct ValueRow {
    std::string eps_exp;  ///< integer k, or "robust" for the max-over-eps row
    int n = 0;
    double dt = 0.0;
    double value = 0.0;
};

void write_value_csv(std::ostream& out, const std::vector<ValueRow>& rows);
[[nodiscard]] std::vector<ValueRow> read_value_csv(std::istream& in);

[[nodiscard]] std::vector<ValueRow> error_rows(const ErrorTable& table);
/// Rates keyed by the coarse column of each (N, dt) -> (2N, dt/4) pair; absent rates are skipped.
[[nodiscard]] std::vector<ValueRow> rate_rows(const ErrorTable& table, const RateTable& rates);

struct SpectralTable {
    std::vector<int> eps_exponents;
    std::vector<LadderStep> ladder;
    std::vector<std::vector<double>> values;
    EigenTarget target = EigenTarget::largest_real;
};

[[nodiscard]] SpectralTable build_spectral_table(const CoupledSystem& system,
                                                 const std::vector<int>& eps_exponents,
                                                 const std::vector<LadderStep>& ladder,
                                                 const SolverSettings& settings,
                                                 EigenTarget target);
[[nodiscard]] std::vector<ValueRow> spectral_rows(const SpectralTable& table);

// --- text layout ---------------------------------------------------------------

[[nodiscard]] std::string format_error(double value);     ///< "8.82E-04"
[[nodiscard]] std::string format_rate(double value);      ///< "4.32"
[[nodiscard]] std::string format_spectral(double value);  ///< "0.59999"

void write_error_table_text(std::ostream& out, const std::string& title, const ErrorTable& table,
                            const RateTable& rates);
void write_spectral_table_text(std::ostream& out, const std::string& title,
                               const SpectralTable& table);

// --- trajectory and mesh dumps -------------------------------------------------

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
[[nodiscard]] Trajectory read_trajectory_csv(std::istream& in);
void write_mesh_dump(std::ostream& out, const GeneralizedShishkinMesh& mesh);

// --- commands ------------------------------------------------------------------

/// Runs a parsed configuration. Output goes to `out` (or config.output_path),
/// diagnostics to `err`. Returns 0, 1 (configuration) or 2 (numerical failure).
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig; throws ConfigError on bad input.
[[nodiscard]] RunConfig parse_command_line(int argc, const char* const* argv);

/// Full entry point used by the executable.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sprd::bench
