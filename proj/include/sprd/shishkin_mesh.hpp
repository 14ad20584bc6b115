#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace sprd {

struct LStar {};
struct LLogN {};
struct LExplicit {
    double value;
};

/// How the mesh constant L is chosen.
using LMode = std::variant<LStar, LLogN, LExplicit>;

struct MeshConfig {
    int n = 64;             ///< number of intervals, n >= 8 and divisible by 4
    double sigma0 = 4.0;    ///< layer-width constant
    LMode l_mode = LStar{};
};

/// Layer-adapted mesh on [0,1]: uniform with width 4 sigma/N on [0, sigma]
/// and [1-sigma, 1], a C^2 cubic continuation in between, mirror-symmetric
/// about 1/2. `widths[j-1]` is h_j = x_j - x_{j-1}.
struct GeneralizedShishkinMesh {
    std::vector<double> nodes;
    std::vector<double> widths;
    double sigma = 0.0;
    double l_value = 0.0;
    double p_coeff = 0.0;
    double h_max = 0.0;
    /// Nodes with index in [regular_begin, regular_end] lie in [sigma, 1-sigma].
    std::size_t regular_begin = 0;
    std::size_t regular_end = 0;

    [[nodiscard]] std::size_t intervals() const noexcept { return widths.size(); }
    /// Width of the interval left of node i (1 <= i <= N).
    [[nodiscard]] double left_width(std::size_t i) const { return widths[i - 1]; }
    /// Width of the interval right of node i (0 <= i <= N-1).
    [[nodiscard]] double right_width(std::size_t i) const { return widths[i]; }
    [[nodiscard]] bool in_layer(std::size_t i) const noexcept {
        return i < regular_begin || i > regular_end;
    }
};

/// Positive root of L e^L = n by bisection on [ln ln n, ln n].
/// Takes a real argument so the root finder can be exercised off the integers.
[[nodiscard]] double solve_l_star(double n);

/// sigma = min(1/4, sigma0 sqrt(eps) L).
[[nodiscard]] double transition_parameter(double epsilon, double l_value, double sigma0);

/// Cubic coefficient p = 32 - 128 sigma fixed by K(1/2) = 1/2.
[[nodiscard]] double cubic_coefficient(double sigma);

/// Mesh-generating function K on [0, 1/2].
[[nodiscard]] double mesh_generating_function(double t, double sigma);

[[nodiscard]] double resolve_l_value(const MeshConfig& config);

[[nodiscard]] GeneralizedShishkinMesh build_mesh(const MeshConfig& config, double epsilon);

/// Coarse nodes plus all interval midpoints (2N intervals). The layer/regular
/// split follows node position, so regular_begin/end double.
[[nodiscard]] GeneralizedShishkinMesh refine_midpoints(const GeneralizedShishkinMesh& mesh);

}  // namespace sprd
