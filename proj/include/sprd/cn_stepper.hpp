#pragma once

#include "sprd/block_tridiagonal.hpp"
#include "sprd/hybrid_scheme.hpp"
#include "sprd/shishkin_mesh.hpp"
#include "sprd/system_catalog.hpp"

#include <cstddef>
#include <vector>

namespace sprd {

struct TimeGrid {
    double dt = 0.0;
    int n_steps = 0;

    [[nodiscard]] double time(int level) const noexcept { return dt * level; }
};

/// Uniform grid on [0, horizon]; rejects step sizes that do not divide the horizon.
[[nodiscard]] TimeGrid make_time_grid(double horizon, double dt);

/// (U^n, W^n): W carries the discrete spatial operator applied to U^n, defined
/// only through the time recursion.
struct EvolutionState {
    GridVector u;
    GridVector w;
    int step_index = 0;
};

/// f(x_i, t) stacked over all nodes.
[[nodiscard]] GridVector sample_source(const CoupledSystem& system,
                                       const GeneralizedShishkinMesh& mesh, double t);

/// max |W^{n+1} + W^n + 2 (U^{n+1} - U^n)/dt - f^n - f^{n+1}| over interior entries.
[[nodiscard]] double recursion_residual(const EvolutionState& before, const EvolutionState& after,
                                        const GridVector& f_now, const GridVector& f_next,
                                        double dt, std::size_t m);

/// One step with the source already sampled at t_n and t_{n+1}.
[[nodiscard]] EvolutionState cn_step(const EvolutionState& state, const SchemeOperators& ops,
                                     const GridVector& f_now, const GridVector& f_next);

[[nodiscard]] EvolutionState cn_step(const EvolutionState& state, const CoupledSystem& system,
                                     const GeneralizedShishkinMesh& mesh,
                                     const SchemeOperators& ops, const TimeGrid& grid);

/// Steps one (system, mesh, dt) run from the zero initial state, sampling
/// the source once per level.
class Stepper {
public:
    Stepper(CoupledSystem system, GeneralizedShishkinMesh mesh, TimeGrid grid,
            double gamma = kDefaultGamma);

    [[nodiscard]] const EvolutionState& state() const noexcept { return state_; }
    [[nodiscard]] const SchemeOperators& operators() const noexcept { return ops_; }
    [[nodiscard]] const GeneralizedShishkinMesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] bool done() const noexcept { return state_.step_index >= grid_.n_steps; }

    /// Advances one level; returns the recursion residual of that step.
    double advance();

private:
    CoupledSystem system_;
    GeneralizedShishkinMesh mesh_;
    TimeGrid grid_;
    SchemeOperators ops_;
    EvolutionState state_;
    GridVector f_now_;
};

enum class Record { all_levels, final_only };

struct Trajectory {
    std::size_t m = 0;
    std::vector<double> nodes;
    std::vector<double> times;
    std::vector<GridVector> levels;

    [[nodiscard]] double value(std::size_t level, std::size_t node, std::size_t k) const {
        return levels[level][static_cast<Eigen::Index>(node * m + k)];
    }
};

struct IntegrateOptions {
    Record record = Record::all_levels;
    double gamma = kDefaultGamma;
    /// Check the W recursion after every step; throws NumericalError on breach.
    bool check_recursion = false;
};

[[nodiscard]] Trajectory integrate(const CoupledSystem& system, const GeneralizedShishkinMesh& mesh,
                                   const TimeGrid& grid, const IntegrateOptions& options = {});

}  // namespace sprd
