#include "sprd/shishkin_mesh.hpp"

#include "sprd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sprd {

namespace {

constexpr double kLStarTolerance = 1e-13;

void check_interval_count(int n) {
    if (n < 8 || n % 4 != 0) {
        throw ConfigError("mesh needs N >= 8 divisible by 4, got N=" + std::to_string(n));
    }
}

}  // namespace

double solve_l_star(double n) {
    // ln(ln n) must be a valid (non-negative) lower bracket.
    if (!(n >= std::numbers::e)) {
        throw ConfigError("L* needs n >= e so that ln(ln n) >= 0");
    }
    double lo = std::log(std::log(n));
    double hi = std::log(n);
    auto residual = [n](double l) { return l * std::exp(l) - n; };
    for (int it = 0; it < 200 && hi - lo > kLStarTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double transition_parameter(double epsilon, double l_value, double sigma0) {
    if (!(epsilon > 0.0) || !(l_value > 0.0) || !(sigma0 > 0.0)) {
        throw ConfigError("transition parameter needs epsilon, L, sigma0 > 0");
    }
    return std::min(0.25, sigma0 * std::sqrt(epsilon) * l_value);
}

double cubic_coefficient(double sigma) { return 32.0 - 128.0 * sigma; }

double mesh_generating_function(double t, double sigma) {
    if (!(t >= 0.0 && t <= 0.5)) {
        throw ConfigError("mesh generating function is defined on [0, 1/2]");
    }
    if (!(sigma > 0.0 && sigma <= 0.25)) {
        throw ConfigError("transition parameter must lie in (0, 1/4]");
    }
    if (t <= 0.25) {
        return 4.0 * sigma * t;
    }
    const double s = t - 0.25;
    return cubic_coefficient(sigma) * s * s * s + 4.0 * sigma * s + sigma;
}

double resolve_l_value(const MeshConfig& config) {
    check_interval_count(config.n);
    const double n = static_cast<double>(config.n);
    if (std::holds_alternative<LStar>(config.l_mode)) {
        return solve_l_star(n);
    }
    if (std::holds_alternative<LLogN>(config.l_mode)) {
        return std::log(n);
    }
    const double l = std::get<LExplicit>(config.l_mode).value;
    if (!(l > std::log(std::log(n)) && l <= std::log(n))) {
        throw ConfigError("explicit L must satisfy ln(ln N) < L <= ln N");
    }
    return l;
}

namespace {

void finish_mesh(GeneralizedShishkinMesh& mesh) {
    const std::size_t n = mesh.nodes.size() - 1;
    mesh.widths.resize(n);
    for (std::size_t j = 1; j <= n; ++j) {
        mesh.widths[j - 1] = mesh.nodes[j] - mesh.nodes[j - 1];
    }
    mesh.h_max = *std::max_element(mesh.widths.begin(), mesh.widths.end());
}

}  // namespace

GeneralizedShishkinMesh build_mesh(const MeshConfig& config, double epsilon) {
    check_interval_count(config.n);
    if (!(config.sigma0 > 0.0)) {
        throw ConfigError("sigma0 must be positive");
    }
    GeneralizedShishkinMesh mesh;
    mesh.l_value = resolve_l_value(config);
    mesh.sigma = transition_parameter(epsilon, mesh.l_value, config.sigma0);
    mesh.p_coeff = cubic_coefficient(mesh.sigma);

    const std::size_t n = static_cast<std::size_t>(config.n);
    const std::size_t half = n / 2;
    mesh.nodes.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < half; ++j) {
        mesh.nodes[j] = mesh_generating_function(static_cast<double>(j) / static_cast<double>(n),
                                                 mesh.sigma);
    }
    mesh.nodes[half] = 0.5;  // K(1/2) = 1/2
    for (std::size_t j = 0; j < half; ++j) {
        mesh.nodes[n - j] = 1.0 - mesh.nodes[j];
    }
    mesh.regular_begin = n / 4;
    mesh.regular_end = 3 * n / 4;
    finish_mesh(mesh);
    return mesh;
}

GeneralizedShishkinMesh refine_midpoints(const GeneralizedShishkinMesh& coarse) {
    const std::size_t n = coarse.intervals();
    const std::size_t fine_n = 2 * n;
    GeneralizedShishkinMesh fine;
    fine.sigma = coarse.sigma;
    fine.l_value = coarse.l_value;
    fine.p_coeff = coarse.p_coeff;
    fine.nodes.assign(fine_n + 1, 0.0);
    for (std::size_t j = 0; j < n / 2; ++j) {
        fine.nodes[2 * j] = coarse.nodes[j];
        fine.nodes[2 * j + 1] = 0.5 * (coarse.nodes[j] + coarse.nodes[j + 1]);
    }
    fine.nodes[n] = 0.5;
    for (std::size_t j = 0; j < n; ++j) {
        fine.nodes[fine_n - j] = 1.0 - fine.nodes[j];
    }
    fine.regular_begin = 2 * coarse.regular_begin;
    fine.regular_end = 2 * coarse.regular_end;
    finish_mesh(fine);
    return fine;
}

}  // namespace sprd
