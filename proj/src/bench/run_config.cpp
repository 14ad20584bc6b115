#include "sprd/bench.hpp"
#include "sprd/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace sprd::bench {

namespace {

int parse_int(std::string_view text, const char* what) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(std::string("cannot parse ") + what + " from '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

SolverSettings RunConfig::settings() const {
    SolverSettings s;
    s.sigma0 = sigma0_override;
    s.l_mode = l_mode;
    s.gamma = gamma;
    return s;
}

std::vector<LadderStep> RunConfig::ladder() const { return refinement_ladder(n0, dt0, levels); }

std::vector<int> parse_eps_exponents(std::string_view text) {
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        const int k = parse_int(text, "eps exponent");
        if (k <= 0) {
            throw ConfigError("eps exponent must be positive");
        }
        return {k};
    }
    const std::string_view first = text.substr(0, dots);
    std::string_view rest = text.substr(dots + 2);
    int step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
        step = parse_int(rest.substr(colon + 1), "eps step");
        rest = rest.substr(0, colon);
    }
    const int lo = parse_int(first, "eps range start");
    const int hi = parse_int(rest, "eps range end");
    if (lo <= 0 || hi < lo || step <= 0) {
        throw ConfigError("eps range must be k1..k2:step with 0 < k1 <= k2 and step > 0");
    }
    std::vector<int> out;
    for (int k = lo; k <= hi; k += step) {
        out.push_back(k);
    }
    return out;
}

LMode parse_l_mode(std::string_view text) {
    if (text == "lstar") {
        return LStar{};
    }
    if (text == "lnN") {
        return LLogN{};
    }
    if (text.substr(0, 6) == "value:") {
        const std::string number(text.substr(6));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(number, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != number.size()) {
            throw ConfigError("cannot parse L value from '" + number + "'");
        }
        return LExplicit{value};
    }
    throw ConfigError("l-mode must be lstar, lnN or value:<real>");
}

std::string l_mode_label(const LMode& mode) {
    if (std::holds_alternative<LStar>(mode)) {
        return "L = L*";
    }
    if (std::holds_alternative<LLogN>(mode)) {
        return "L = ln N";
    }
    return "L = " + std::to_string(std::get<LExplicit>(mode).value);
}

void validate(const RunConfig& config) {
    if (config.levels < 1) {
        throw ConfigError("--levels must be at least 1");
    }
    if (config.eps_exponents.empty()) {
        throw ConfigError("at least one eps exponent is required");
    }
    if (!(config.gamma >= 0.0)) {
        throw ConfigError("--gamma must be non-negative");
    }
    if (config.sigma0_override && !(*config.sigma0_override > 0.0)) {
        throw ConfigError("--sigma0 must be positive");
    }
    if (config.command == Command::table && (config.table_id < 1 || config.table_id > 6)) {
        throw ConfigError("table id must be 1..6");
    }
    const int levels = config.command == Command::solve || config.command == Command::dump_mesh
                           ? 1
                           : config.levels;
    for (const auto& step : refinement_ladder(config.n0, config.dt0, levels)) {
        if (step.n < 8 || step.n % 4 != 0) {
            throw ConfigError("every N in the ladder must be >= 8 and divisible by 4 (got " +
                              std::to_string(step.n) + ")");
        }
        (void)make_time_grid(1.0, step.dt);
    }
}

CoupledSystem example_system(int id, double epsilon) {
    if (id == 0) {
        return zero_source_example(epsilon);
    }
    return builtin_example(id, epsilon);
}

}  // namespace sprd::bench
