#pragma once

#include "sprd/block_tridiagonal.hpp"
#include "sprd/shishkin_mesh.hpp"
#include "sprd/system_catalog.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sprd {

inline constexpr double kDefaultGamma = 1.0 / 6.0;

/// Weights used in [sigma, 1-sigma]: the non-equidistant compact weights when
/// gamma h_max^2 |a_kk + 2/dt|_inf <= eps, plain central differencing otherwise.
enum class Regime { compact, central };

[[nodiscard]] const char* regime_name(Regime regime) noexcept;

struct WeightTriple {
    double minus = 0.0;
    double centre = 0.0;
    double plus = 0.0;

    [[nodiscard]] double sum() const noexcept { return minus + centre + plus; }
};

/// q and r triples per (node, component); storage covers nodes 0..N but only
/// interior nodes carry weights.
struct StencilWeights {
    std::size_t n = 0;  ///< intervals
    std::size_t m = 0;
    std::vector<WeightTriple> q;
    std::vector<WeightTriple> r;
    std::vector<Regime> regime;
    double gamma = kDefaultGamma;
    Eigen::VectorXd a_hat_sup;

    [[nodiscard]] const WeightTriple& q_at(std::size_t i, std::size_t k) const { return q[i * m + k]; }
    [[nodiscard]] const WeightTriple& r_at(std::size_t i, std::size_t k) const { return r[i * m + k]; }
};

/// sup |a_kk| over mesh nodes and a uniform grid of kCoefficientSamples points.
[[nodiscard]] Eigen::VectorXd diagonal_sup(const CoupledSystem& system,
                                           const GeneralizedShishkinMesh& mesh);

[[nodiscard]] std::vector<Regime> select_regime(const GeneralizedShishkinMesh& mesh,
                                                std::span<const double> diag_sup,
                                                double epsilon, double dt, double gamma);

[[nodiscard]] WeightTriple quadrature_weights(const GeneralizedShishkinMesh& mesh, Regime regime,
                                              std::size_t i);

/// r weights for node i, component k given its q triple. Absorbs the
/// identity so that r^- + r^c + r^+ = 1 + (dt/2) sum_m q^m a_kk(x_{i+m}).
[[nodiscard]] WeightTriple stencil_weights_r(const GeneralizedShishkinMesh& mesh,
                                             const CoupledSystem& system, double dt,
                                             const WeightTriple& q, std::size_t i, std::size_t k);

/// Same as above with the diagonal coefficients already sampled at x_{i-1}, x_i, x_{i+1}.
[[nodiscard]] WeightTriple stencil_weights_r(double left_width, double right_width,
                                             double epsilon, double dt, const WeightTriple& q,
                                             double a_left, double a_centre, double a_right);

[[nodiscard]] StencilWeights compute_weights(const GeneralizedShishkinMesh& mesh,
                                             const CoupledSystem& system, double dt,
                                             double gamma = kDefaultGamma);

/// Left-hand operator: R on the diagonal of each block, (dt/2) q a_kj on the
/// couplings, identity boundary rows.
[[nodiscard]] BlockTridiagonal assemble_lhs(const GeneralizedShishkinMesh& mesh,
                                            const CoupledSystem& system, double dt,
                                            const StencilWeights& weights);

/// Component-wise quadrature operator Q (block diagonal in components).
[[nodiscard]] BlockTridiagonal assemble_q_operator(const GeneralizedShishkinMesh& mesh,
                                                   const StencilWeights& weights);

struct SignViolation {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

struct PositivityReport {
    /// (N/L)^2 versus max_k 4 sigma0^2 (|a_kk|_inf + 2/dt) / 3.
    double mesh_side = 0.0;
    double coefficient_side = 0.0;
    bool hypothesis_ok = false;
    /// Per component: gamma h_max^2 |a_hat_kk|_inf and whether the compact
    /// regime (if chosen) respects it against eps.
    std::vector<double> switch_lhs;
    std::vector<Regime> regimes;
    bool switch_ok = true;
    std::vector<SignViolation> violations;

    [[nodiscard]] bool passed() const noexcept {
        return hypothesis_ok && switch_ok && violations.empty();
    }
    [[nodiscard]] std::string describe() const;
};

[[nodiscard]] PositivityReport verify_positive_type(const GeneralizedShishkinMesh& mesh,
                                                    const CoupledSystem& system, double dt,
                                                    double sigma0, double gamma = kDefaultGamma);

/// Weights plus both assembled operators and the factorization of the
/// left-hand side, built once per (system, mesh, dt).
struct SchemeOperators {
    StencilWeights weights;
    BlockTridiagonal lhs;
    BlockTridiagonal quadrature;
    BlockThomasFactorization lhs_factor;
    double dt = 0.0;
};

[[nodiscard]] SchemeOperators build_operators(const GeneralizedShishkinMesh& mesh,
                                              const CoupledSystem& system, double dt,
                                              double gamma = kDefaultGamma);

}  // namespace sprd
