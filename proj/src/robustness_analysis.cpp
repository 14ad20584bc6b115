#include "sprd/robustness_analysis.hpp"

#include "sprd/arnoldi.hpp"
#include "sprd/cn_stepper.hpp"
#include "sprd/errors.hpp"
#include "sprd/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <utility>

namespace sprd {

double default_sigma0(const CoupledSystem& system) {
    const SystemDiagnostics diag = validate_coupling(system);
    if (!diag.rowsum_ok) {
        throw ConfigError("coupling has no positive row-sum bound (beta* <= 0); "
                          "shift the system or pass sigma0 explicitly");
    }
    return 4.0 / std::sqrt(diag.beta_star);
}

MeshConfig mesh_config_for(const CoupledSystem& system, int n, const SolverSettings& settings) {
    MeshConfig config;
    config.n = n;
    config.sigma0 = settings.sigma0 ? *settings.sigma0 : default_sigma0(system);
    config.l_mode = settings.l_mode;
    return config;
}

double double_mesh_error(const CoupledSystem& system, int n, double dt,
                         const SolverSettings& settings) {
    const GeneralizedShishkinMesh coarse_mesh =
        build_mesh(mesh_config_for(system, n, settings), system.epsilon());
    GeneralizedShishkinMesh fine_mesh = refine_midpoints(coarse_mesh);
    const TimeGrid coarse_grid = make_time_grid(system.horizon(), dt);
    const TimeGrid fine_grid{0.5 * dt, 2 * coarse_grid.n_steps};

    Stepper coarse(system, coarse_mesh, coarse_grid, settings.gamma);
    Stepper fine(system, std::move(fine_mesh), fine_grid, settings.gamma);
    const auto m = static_cast<Eigen::Index>(system.m());
    const auto nodes = static_cast<Eigen::Index>(coarse_mesh.nodes.size());

    double worst = 0.0;
    while (!coarse.done()) {
        coarse.advance();
        fine.advance();
        fine.advance();
        const GridVector& uc = coarse.state().u;
        const GridVector& uf = fine.state().u;
        for (Eigen::Index i = 0; i < nodes; ++i) {
            for (Eigen::Index k = 0; k < m; ++k) {
                worst = std::max(worst, std::abs(uc[i * m + k] - uf[2 * i * m + k]));
            }
        }
    }
    if (!std::isfinite(worst)) {
        throw NumericalError("double-mesh error is not finite");
    }
    return worst;
}

std::vector<LadderStep> refinement_ladder(int n0, double dt0, int levels) {
    if (levels < 1) {
        throw ConfigError("ladder needs at least one level");
    }
    std::vector<LadderStep> ladder;
    int n = n0;
    double dt = dt0;
    for (int j = 0; j < levels; ++j) {
        ladder.push_back({n, dt});
        n *= 2;
        dt /= 4.0;
    }
    return ladder;
}

std::vector<double> ErrorTable::robust_row() const {
    std::vector<double> row(ladder.size(), 0.0);
    for (const auto& eps_row : values) {
        for (std::size_t c = 0; c < row.size() && c < eps_row.size(); ++c) {
            row[c] = std::max(row[c], eps_row[c]);
        }
    }
    return row;
}

ErrorTable build_error_table(const CoupledSystem& system, const std::vector<int>& eps_exponents,
                             const std::vector<LadderStep>& ladder,
                             const SolverSettings& settings) {
    ErrorTable table;
    table.eps_exponents = eps_exponents;
    table.ladder = ladder;
    table.values.assign(eps_exponents.size(), std::vector<double>(ladder.size(), 0.0));
    const std::size_t cols = ladder.size();
    // Largest cells first keeps the pool busy at the tail.
    std::vector<std::size_t> order(eps_exponents.size() * cols);
    for (std::size_t c = 0; c < order.size(); ++c) {
        order[c] = c;
    }
    std::stable_sort(order.begin(), order.end(), [cols](std::size_t a, std::size_t b) {
        return a % cols > b % cols;
    });
    parallel_for(order.size(), [&](std::size_t slot) {
        const std::size_t cell = order[slot];
        const std::size_t row = cell / cols;
        const std::size_t col = cell % cols;
        const CoupledSystem sys = system.with_epsilon(std::ldexp(1.0, -eps_exponents[row]));
        table.values[row][col] = double_mesh_error(sys, ladder[col].n, ladder[col].dt, settings);
    });
    return table;
}

std::optional<double> rate_between(double coarse_error, double fine_error) {
    if (!(coarse_error > 0.0) || !(fine_error > 0.0) || !std::isfinite(coarse_error) ||
        !std::isfinite(fine_error)) {
        return std::nullopt;
    }
    return (std::log(coarse_error) - std::log(fine_error)) / std::log(2.0);
}

RateTable convergence_rates(const ErrorTable& errors) {
    RateTable rates;
    const std::size_t pairs = errors.ladder.size() > 0 ? errors.ladder.size() - 1 : 0;
    for (const auto& row : errors.values) {
        std::vector<std::optional<double>> out(pairs);
        for (std::size_t c = 0; c < pairs; ++c) {
            if (c + 1 < row.size()) {
                out[c] = rate_between(row[c], row[c + 1]);
            }
        }
        rates.classical.push_back(std::move(out));
    }
    const std::vector<double> robust = errors.robust_row();
    rates.robust.resize(pairs);
    for (std::size_t c = 0; c < pairs; ++c) {
        rates.robust[c] = rate_between(robust[c], robust[c + 1]);
    }
    return rates;
}

namespace {

BlockTridiagonal with_identity_boundary(BlockTridiagonal op) {
    const auto m = static_cast<Eigen::Index>(op.block_size());
    const std::size_t last = op.node_count() - 1;
    op.diag(0) = Eigen::MatrixXd::Identity(m, m);
    op.sup(0).setZero();
    op.diag(last) = Eigen::MatrixXd::Identity(m, m);
    op.sub(last).setZero();
    return op;
}

}  // namespace

TransitionOperator::TransitionOperator(BlockTridiagonal lhs, BlockTridiagonal quadrature)
    : lhs_(std::move(lhs)), quadrature_(std::move(quadrature)) {
    if (lhs_.block_size() != quadrature_.block_size() ||
        lhs_.node_count() != quadrature_.node_count()) {
        throw ConfigError("transition operator needs B and Q of the same shape");
    }
    right_ = with_identity_boundary(quadrature_.scaled(2.0).minus(lhs_));
    lhs_factor_ = BlockThomasFactorization(lhs_);
    gap_factor_ = BlockThomasFactorization(with_identity_boundary(lhs_.minus(quadrature_)));
    dimension_ = lhs_.block_size() * lhs_.n_interior();
}

GridVector TransitionOperator::embed(const Eigen::VectorXd& interior) const {
    if (static_cast<std::size_t>(interior.size()) != dimension_) {
        throw ConfigError("interior vector length does not match the transition operator");
    }
    const auto m = static_cast<Eigen::Index>(block_size());
    GridVector full = GridVector::Zero(static_cast<Eigen::Index>(lhs_.dimension()));
    full.segment(m, interior.size()) = interior;
    return full;
}

Eigen::VectorXd TransitionOperator::restrict_interior(const GridVector& full) const {
    const auto m = static_cast<Eigen::Index>(block_size());
    return full.segment(m, static_cast<Eigen::Index>(dimension_));
}

Eigen::VectorXd TransitionOperator::apply(const Eigen::VectorXd& interior) const {
    GridVector rhs = right_.multiply(embed(interior));
    return restrict_interior(lhs_factor_.solve(rhs));
}

Eigen::VectorXd TransitionOperator::apply_shift_invert(const Eigen::VectorXd& interior) const {
    GridVector rhs = quadrature_.multiply(embed(interior));
    const auto m = static_cast<Eigen::Index>(block_size());
    rhs.head(m).setZero();
    rhs.tail(m).setZero();
    return restrict_interior(gap_factor_.solve(rhs));
}

Eigen::MatrixXd TransitionOperator::to_dense() const {
    const auto dim = static_cast<Eigen::Index>(dimension_);
    Eigen::MatrixXd dense(dim, dim);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        unit[j] = 1.0;
        dense.col(j) = apply(unit);
        unit[j] = 0.0;
    }
    return dense;
}

TransitionOperator assemble_transition(const BlockTridiagonal& lhs,
                                       const BlockTridiagonal& quadrature) {
    return {lhs, quadrature};
}

TransitionOperator transition_operator_for(const CoupledSystem& system, int n, double dt,
                                           const SolverSettings& settings) {
    const GeneralizedShishkinMesh mesh =
        build_mesh(mesh_config_for(system, n, settings), system.epsilon());
    const StencilWeights weights = compute_weights(mesh, system, dt, settings.gamma);
    return {assemble_lhs(mesh, system, dt, weights), assemble_q_operator(mesh, weights)};
}

const char* method_name(SpectralMethod method) noexcept {
    switch (method) {
        case SpectralMethod::power_iteration: return "power_iteration";
        case SpectralMethod::shift_invert: return "shift_invert";
        case SpectralMethod::arnoldi: return "arnoldi";
        case SpectralMethod::dense_spectrum: return "dense_spectrum";
    }
    return "unknown";
}

Eigen::VectorXcd dense_eigenvalues(const TransitionOperator& op) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(op.to_dense(), false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("dense eigen-solve did not converge");
    }
    return solver.eigenvalues();
}

namespace {

struct PowerResult {
    double magnitude = 0.0;
    int iterations = 0;
    bool converged = false;
};

template <typename Apply>
PowerResult power_iterate(std::size_t dim, Apply&& apply, const SpectralOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = dist(rng);
    }
    x.normalize();

    const auto window = static_cast<std::size_t>(std::max(2, options.window));
    std::deque<double> log_growth;
    std::deque<double> estimates;
    double log_sum = 0.0;
    PowerResult result;
    for (int it = 1; it <= options.max_iters; ++it) {
        Eigen::VectorXd y = apply(x);
        const double norm = y.norm();
        result.iterations = it;
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            // The iterate was annihilated: every eigenvalue it touched is zero.
            result.magnitude = 0.0;
            result.converged = std::isfinite(norm);
            return result;
        }
        const double lg = std::log(norm);
        log_growth.push_back(lg);
        log_sum += lg;
        if (log_growth.size() > window) {
            log_sum -= log_growth.front();
            log_growth.pop_front();
        }
        x = y / norm;
        if (log_growth.size() < window) {
            continue;
        }
        const double estimate = std::exp(log_sum / static_cast<double>(window));
        estimates.push_back(estimate);
        if (estimates.size() > window) {
            estimates.pop_front();
        }
        result.magnitude = estimate;
        if (estimates.size() == window) {
            const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
            if (*hi - *lo < options.tol * *hi) {
                result.converged = true;
                return result;
            }
        }
    }
    return result;
}

double dense_target(const Eigen::VectorXcd& eigenvalues, EigenTarget target) {
    double best = target == EigenTarget::largest_modulus ? 0.0 : -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        best = target == EigenTarget::largest_modulus ? std::max(best, std::abs(eigenvalues[i]))
                                                      : std::max(best, eigenvalues[i].real());
    }
    return best;
}

}  // namespace

SpectralEstimate estimate_spectrum(const TransitionOperator& op, const SpectralOptions& options) {
    if (!(options.tol > 0.0)) {
        throw ConfigError("spectral tolerance must be positive");
    }
    const std::size_t dim = op.dimension();
    SpectralEstimate estimate;
    const auto dense = [&] {
        estimate.value = dense_target(dense_eigenvalues(op), options.target);
        estimate.method = SpectralMethod::dense_spectrum;
        return estimate;
    };
    if (dim <= options.dense_limit) {
        return dense();
    }

    ArnoldiOptions arnoldi;
    arnoldi.seed = options.seed;
    arnoldi.tol = options.arnoldi_tol;
    if (options.target == EigenTarget::largest_modulus) {
        const PowerResult power =
            power_iterate(dim, [&](const Eigen::VectorXd& v) { return op.apply(v); }, options);
        estimate.iterations = power.iterations;
        if (power.converged) {
            estimate.value = power.magnitude;
            estimate.method = SpectralMethod::power_iteration;
            return estimate;
        }
        try {
            const ArnoldiResult ritz = arnoldi_eigenvalues(
                dim, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = op.apply(x); },
                ArnoldiWhich::largest_magnitude, arnoldi);
            estimate.value = ritz.values.cwiseAbs().maxCoeff();
            estimate.method = SpectralMethod::arnoldi;
            estimate.iterations = ritz.restarts;
            return estimate;
        } catch (const NumericalError&) {
            if (dim > options.dense_cap) {
                throw;
            }
        }
        return dense();
    }

    // Largest real eigenvalue theta of R <-> largest real nu of (B-Q)^{-1} Q.
    try {
        const ArnoldiResult ritz = arnoldi_eigenvalues(
            dim, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = op.apply_shift_invert(x); },
            ArnoldiWhich::largest_real, arnoldi);
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < ritz.values.size(); ++i) {
            const std::complex<double> nu = ritz.values[i];
            best = std::max(best, ((nu - 1.0) / (nu + 1.0)).real());
        }
        estimate.value = best;
        estimate.method = SpectralMethod::shift_invert;
        estimate.iterations = ritz.restarts;
        return estimate;
    } catch (const NumericalError&) {
        if (dim > options.dense_cap) {
            throw;
        }
    }
    return dense();
}

double spectral_radius(const TransitionOperator& op, double tol, int max_iters) {
    SpectralOptions options;
    options.tol = tol;
    options.max_iters = max_iters;
    return estimate_spectrum(op, options).value;
}

}  // namespace sprd
