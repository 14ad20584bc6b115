#include "sprd/bench.hpp"
#include "sprd/errors.hpp"
#include "sprd/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sprd::bench {

namespace {

std::string printf_string(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

std::string exact(double value) { return printf_string("%.17g", value); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double to_double(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("malformed number in CSV: '" + text + "'");
    }
    return value;
}

int to_int(const std::string& text) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("malformed integer in CSV: '" + text + "'");
    }
    return value;
}

constexpr const char* kValueHeader = "eps_exp,N,dt,value";
constexpr const char* kTrajectoryHeader = "t,x,component,value";

void write_column_headers(std::ostream& out, const std::vector<LadderStep>& ladder) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s", "eps=2^-k");
    out << buf;
    for (const auto& step : ladder) {
        std::snprintf(buf, sizeof(buf), "  %-10s", ("N=" + std::to_string(step.n)).c_str());
        out << buf;
    }
    out << '\n';
    std::snprintf(buf, sizeof(buf), "%-10s", "");
    out << buf;
    for (const auto& step : ladder) {
        std::snprintf(buf, sizeof(buf), "  %-10s", ("dt=" + printf_string("%g", step.dt)).c_str());
        out << buf;
    }
    out << '\n';
}

void write_cells(std::ostream& out, const std::string& label, const std::vector<std::string>& cells) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s", label.c_str());
    out << buf;
    for (const auto& cell : cells) {
        std::snprintf(buf, sizeof(buf), "  %-10s", cell.c_str());
        out << buf;
    }
    out << '\n';
}

std::vector<std::string> rate_cells(const std::vector<std::optional<double>>& rates) {
    std::vector<std::string> cells;
    for (const auto& r : rates) {
        cells.push_back(r ? format_rate(*r) : std::string("-"));
    }
    return cells;
}

}  // namespace

void write_value_csv(std::ostream& out, const std::vector<ValueRow>& rows) {
    out << kValueHeader << '\n';
    for (const auto& row : rows) {
        out << row.eps_exp << ',' << row.n << ',' << exact(row.dt) << ',' << exact(row.value) << '\n';
    }
}

std::vector<ValueRow> read_value_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kValueHeader) {
        throw ConfigError(std::string("value CSV must start with '") + kValueHeader + "'");
    }
    std::vector<ValueRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw ConfigError("value CSV rows need 4 fields: '" + line + "'");
        }
        rows.push_back({fields[0], to_int(fields[1]), to_double(fields[2]), to_double(fields[3])});
    }
    return rows;
}

std::vector<ValueRow> error_rows(const ErrorTable& table) {
    std::vector<ValueRow> rows;
    for (std::size_t r = 0; r < table.values.size(); ++r) {
        for (std::size_t c = 0; c < table.ladder.size(); ++c) {
            rows.push_back({std::to_string(table.eps_exponents[r]), table.ladder[c].n,
                            table.ladder[c].dt, table.values[r][c]});
        }
    }
    const auto robust = table.robust_row();
    for (std::size_t c = 0; c < table.ladder.size(); ++c) {
        rows.push_back({"robust", table.ladder[c].n, table.ladder[c].dt, robust[c]});
    }
    return rows;
}

std::vector<ValueRow> rate_rows(const ErrorTable& table, const RateTable& rates) {
    std::vector<ValueRow> rows;
    for (std::size_t r = 0; r < rates.classical.size(); ++r) {
        for (std::size_t c = 0; c < rates.classical[r].size(); ++c) {
            if (rates.classical[r][c]) {
                rows.push_back({std::to_string(table.eps_exponents[r]), table.ladder[c].n,
                                table.ladder[c].dt, *rates.classical[r][c]});
            }
        }
    }
    for (std::size_t c = 0; c < rates.robust.size(); ++c) {
        if (rates.robust[c]) {
            rows.push_back({"robust", table.ladder[c].n, table.ladder[c].dt, *rates.robust[c]});
        }
    }
    return rows;
}

SpectralTable build_spectral_table(const CoupledSystem& system, const std::vector<int>& eps_exponents,
                                   const std::vector<LadderStep>& ladder,
                                   const SolverSettings& settings, EigenTarget target) {
    SpectralTable table;
    table.eps_exponents = eps_exponents;
    table.ladder = ladder;
    table.target = target;
    table.values.assign(eps_exponents.size(), std::vector<double>(ladder.size(), 0.0));
    const std::size_t cols = ladder.size();
    parallel_for(eps_exponents.size() * cols, [&](std::size_t cell) {
        const std::size_t row = cell / cols;
        const std::size_t col = cell % cols;
        const CoupledSystem sys = system.with_epsilon(std::ldexp(1.0, -eps_exponents[row]));
        const TransitionOperator op =
            transition_operator_for(sys, ladder[col].n, ladder[col].dt, settings);
        SpectralOptions options;
        options.target = target;
        table.values[row][col] = estimate_spectrum(op, options).value;
    });
    return table;
}

std::vector<ValueRow> spectral_rows(const SpectralTable& table) {
    std::vector<ValueRow> rows;
    for (std::size_t r = 0; r < table.values.size(); ++r) {
        for (std::size_t c = 0; c < table.ladder.size(); ++c) {
            rows.push_back({std::to_string(table.eps_exponents[r]), table.ladder[c].n,
                            table.ladder[c].dt, table.values[r][c]});
        }
    }
    return rows;
}

std::string format_error(double value) { return printf_string("%.2E", value); }
std::string format_rate(double value) { return printf_string("%.2f", value); }
std::string format_spectral(double value) { return printf_string("%.5f", value); }

void write_error_table_text(std::ostream& out, const std::string& title, const ErrorTable& table,
                            const RateTable& rates) {
    out << title << '\n';
    write_column_headers(out, table.ladder);
    for (std::size_t r = 0; r < table.values.size(); ++r) {
        std::vector<std::string> cells;
        for (double v : table.values[r]) {
            cells.push_back(format_error(v));
        }
        write_cells(out, "k=" + std::to_string(table.eps_exponents[r]), cells);
        write_cells(out, "", rate_cells(rates.classical[r]));
    }
    std::vector<std::string> robust_cells;
    for (double v : table.robust_row()) {
        robust_cells.push_back(format_error(v));
    }
    write_cells(out, "E_N,dt", robust_cells);
    write_cells(out, "p^N", rate_cells(rates.robust));
}

void write_spectral_table_text(std::ostream& out, const std::string& title,
                               const SpectralTable& table) {
    out << title << '\n';
    write_column_headers(out, table.ladder);
    for (std::size_t r = 0; r < table.values.size(); ++r) {
        std::vector<std::string> cells;
        for (double v : table.values[r]) {
            cells.push_back(format_spectral(v));
        }
        write_cells(out, "k=" + std::to_string(table.eps_exponents[r]), cells);
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << kTrajectoryHeader << '\n';
    for (std::size_t level = 0; level < trajectory.levels.size(); ++level) {
        const std::string t = exact(trajectory.times[level]);
        for (std::size_t i = 0; i < trajectory.nodes.size(); ++i) {
            const std::string x = exact(trajectory.nodes[i]);
            for (std::size_t k = 0; k < trajectory.m; ++k) {
                out << t << ',' << x << ',' << k + 1 << ',' << exact(trajectory.value(level, i, k))
                    << '\n';
            }
        }
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) {
        throw ConfigError(std::string("trajectory CSV must start with '") + kTrajectoryHeader + "'");
    }
    struct Row {
        double t;
        double x;
        int k;
        double v;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 4) {
            throw ConfigError("trajectory CSV rows need 4 fields: '" + line + "'");
        }
        rows.push_back({to_double(f[0]), to_double(f[1]), to_int(f[2]), to_double(f[3])});
    }
    Trajectory traj;
    if (rows.empty()) {
        return traj;
    }
    int m = 0;
    for (const auto& r : rows) {
        m = std::max(m, r.k);
    }
    traj.m = static_cast<std::size_t>(m);
    for (const auto& r : rows) {
        if (r.t != rows.front().t) {
            break;
        }
        if (r.k == 1) {
            traj.nodes.push_back(r.x);
        }
    }
    const std::size_t per_level = traj.nodes.size() * traj.m;
    if (per_level == 0 || rows.size() % per_level != 0) {
        throw ConfigError("trajectory CSV is not a full (level, node, component) grid");
    }
    for (std::size_t start = 0; start < rows.size(); start += per_level) {
        traj.times.push_back(rows[start].t);
        GridVector level(static_cast<Eigen::Index>(per_level));
        for (std::size_t j = 0; j < per_level; ++j) {
            level[static_cast<Eigen::Index>(j)] = rows[start + j].v;
        }
        traj.levels.push_back(std::move(level));
    }
    return traj;
}

void write_mesh_dump(std::ostream& out, const GeneralizedShishkinMesh& mesh) {
    out << "# N=" << mesh.intervals() << " sigma=" << exact(mesh.sigma) << " L=" << exact(mesh.l_value)
        << " p=" << exact(mesh.p_coeff) << '\n';
    for (std::size_t j = 0; j < mesh.nodes.size(); ++j) {
        out << j << '\t' << exact(mesh.nodes[j]) << '\t';
        if (j > 0) {
            out << exact(mesh.left_width(j));
        }
        out << '\n';
    }
}

}  // namespace sprd::bench
