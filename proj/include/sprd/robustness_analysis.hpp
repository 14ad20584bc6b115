#pragma once

#include "sprd/block_tridiagonal.hpp"
#include "sprd/hybrid_scheme.hpp"
#include "sprd/shishkin_mesh.hpp"
#include "sprd/system_catalog.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sprd {

/// Knobs shared by every run: mesh constant, layer-width constant, switch constant.
struct SolverSettings {
    std::optional<double> sigma0;  ///< default 4 / sqrt(beta*)
    LMode l_mode = LStar{};
    double gamma = kDefaultGamma;
};

[[nodiscard]] double default_sigma0(const CoupledSystem& system);
[[nodiscard]] MeshConfig mesh_config_for(const CoupledSystem& system, int n,
                                         const SolverSettings& settings);

/// Max over coarse nodes, coarse time levels and components of the difference
/// between the (N, dt) solution and the midpoint-refined (2N, dt/2) solution.
[[nodiscard]] double double_mesh_error(const CoupledSystem& system, int n, double dt,
                                       const SolverSettings& settings = {});

struct LadderStep {
    int n = 0;
    double dt = 0.0;
};

/// (n0 2^j, dt0 / 4^j) for j = 0..levels-1.
[[nodiscard]] std::vector<LadderStep> refinement_ladder(int n0, double dt0, int levels);

struct ErrorTable {
    std::vector<int> eps_exponents;  ///< eps = 2^-k
    std::vector<LadderStep> ladder;
    std::vector<std::vector<double>> values;  ///< [eps row][ladder column]

    /// Column-wise max over eps.
    [[nodiscard]] std::vector<double> robust_row() const;
};

/// Fills one cell per (eps, ladder step); cells run on the worker pool.
[[nodiscard]] ErrorTable build_error_table(const CoupledSystem& system,
                                           const std::vector<int>& eps_exponents,
                                           const std::vector<LadderStep>& ladder,
                                           const SolverSettings& settings = {});

struct RateTable {
    std::vector<std::vector<std::optional<double>>> classical;  ///< [eps row][column pair]
    std::vector<std::optional<double>> robust;
};

/// log2 of consecutive error ratios along the ladder; absent when either
/// error is zero, missing or non-finite.
[[nodiscard]] std::optional<double> rate_between(double coarse_error, double fine_error);
[[nodiscard]] RateTable convergence_rates(const ErrorTable& errors);

/// One-step map of the source-free scheme on interior nodes:
/// R = B^{-1} (2Q - B).
class TransitionOperator {
public:
    TransitionOperator(BlockTridiagonal lhs, BlockTridiagonal quadrature);

    /// m (N - 1).
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t block_size() const noexcept { return lhs_.block_size(); }

    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& interior) const;
    /// (B - Q)^{-1} Q, whose eigenvalues nu map to R's via (nu - 1)/(nu + 1).
    [[nodiscard]] Eigen::VectorXd apply_shift_invert(const Eigen::VectorXd& interior) const;
    [[nodiscard]] Eigen::MatrixXd to_dense() const;

    [[nodiscard]] const BlockTridiagonal& lhs() const noexcept { return lhs_; }
    [[nodiscard]] const BlockTridiagonal& quadrature() const noexcept { return quadrature_; }
    /// C = 2Q - B.
    [[nodiscard]] const BlockTridiagonal& right_operator() const noexcept { return right_; }

    [[nodiscard]] GridVector embed(const Eigen::VectorXd& interior) const;
    [[nodiscard]] Eigen::VectorXd restrict_interior(const GridVector& full) const;

private:
    BlockTridiagonal lhs_;
    BlockTridiagonal quadrature_;
    BlockTridiagonal right_;
    BlockThomasFactorization lhs_factor_;
    BlockThomasFactorization gap_factor_;  // B - Q with identity boundary rows
    std::size_t dimension_ = 0;
};

[[nodiscard]] TransitionOperator assemble_transition(const BlockTridiagonal& lhs,
                                                     const BlockTridiagonal& quadrature);

[[nodiscard]] TransitionOperator transition_operator_for(const CoupledSystem& system, int n,
                                                         double dt,
                                                         const SolverSettings& settings = {});

/// Which end of the spectrum to estimate. `largest_modulus` is the spectral
/// radius. `largest_real` is the amplification of the slowest-decaying
/// smooth mode, which is what the published tables list.
enum class EigenTarget { largest_modulus, largest_real };

enum class SpectralMethod { power_iteration, arnoldi, shift_invert, dense_spectrum };

[[nodiscard]] const char* method_name(SpectralMethod method) noexcept;

struct SpectralOptions {
    EigenTarget target = EigenTarget::largest_modulus;
    double tol = 1e-9;
    double arnoldi_tol = 1e-6;  ///< relative Ritz residual for the Arnoldi routes
    int max_iters = 20000;
    int window = 50;
    std::size_t dense_limit = 600;   ///< at or below: dense eigen-solve directly
    std::size_t dense_cap = 3200;    ///< largest size the dense fallback accepts
    std::uint64_t seed = 0x5eed5eedULL;
};

struct SpectralEstimate {
    double value = 0.0;
    SpectralMethod method = SpectralMethod::power_iteration;
    int iterations = 0;
};

/// Small operators: dense eigen-solve. Largest modulus: power iteration with a
/// growth-factor geometric mean over a trailing window, then Arnoldi on R if
/// the window never settles. Largest real: Arnoldi on (B - Q)^{-1} Q. Falls
/// back to the dense solve up to dense_cap, otherwise throws NumericalError.
[[nodiscard]] SpectralEstimate estimate_spectrum(const TransitionOperator& op,
                                                 const SpectralOptions& options = {});

/// Spectral radius (largest modulus) of R.
[[nodiscard]] double spectral_radius(const TransitionOperator& op, double tol, int max_iters);

/// All eigenvalues of the dense form of R.
[[nodiscard]] Eigen::VectorXcd dense_eigenvalues(const TransitionOperator& op);

}  // namespace sprd
