#include "sprd/cn_stepper.hpp"

#include "sprd/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace sprd {

TimeGrid make_time_grid(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0)) {
        throw ConfigError("time step and horizon must be positive");
    }
    const double ratio = horizon / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * dt - horizon) > 1e-12 * horizon) {
        throw ConfigError("T/dt must be integral (T=" + std::to_string(horizon) +
                          ", dt=" + std::to_string(dt) + ")");
    }
    return {dt, static_cast<int>(steps)};
}

GridVector sample_source(const CoupledSystem& system, const GeneralizedShishkinMesh& mesh,
                         double t) {
    const auto m = static_cast<Eigen::Index>(system.m());
    GridVector f(static_cast<Eigen::Index>(mesh.nodes.size()) * m);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        f.segment(static_cast<Eigen::Index>(i) * m, m) = system.source(mesh.nodes[i], t);
    }
    return f;
}

double recursion_residual(const EvolutionState& before, const EvolutionState& after,
                          const GridVector& f_now, const GridVector& f_next, double dt,
                          std::size_t m) {
    const auto mm = static_cast<Eigen::Index>(m);
    const Eigen::Index interior = before.u.size() - 2 * mm;
    if (interior <= 0) {
        return 0.0;
    }
    const Eigen::VectorXd defect =
        (after.w + before.w + 2.0 * (after.u - before.u) / dt - f_now - f_next)
            .segment(mm, interior);
    return defect.cwiseAbs().maxCoeff();
}

EvolutionState cn_step(const EvolutionState& state, const SchemeOperators& ops,
                       const GridVector& f_now, const GridVector& f_next) {
    const double dt = ops.dt;
    const auto m = static_cast<Eigen::Index>(ops.weights.m);

    GridVector load = state.u + 0.5 * dt * (f_now + f_next - state.w);
    GridVector rhs = ops.quadrature.multiply(load);
    rhs.head(m).setZero();
    rhs.tail(m).setZero();

    EvolutionState next;
    next.u = ops.lhs_factor.solve(rhs);
    next.u.head(m).setZero();
    next.u.tail(m).setZero();
    // Boundary entries follow the recursion too, with U = 0 there.
    next.w = -state.w - 2.0 * (next.u - state.u) / dt + f_now + f_next;
    next.step_index = state.step_index + 1;
    return next;
}

EvolutionState cn_step(const EvolutionState& state, const CoupledSystem& system,
                       const GeneralizedShishkinMesh& mesh, const SchemeOperators& ops,
                       const TimeGrid& grid) {
    if (state.step_index < 0 || state.step_index >= grid.n_steps) {
        throw ConfigError("step index outside the time grid");
    }
    return cn_step(state, ops, sample_source(system, mesh, grid.time(state.step_index)),
                   sample_source(system, mesh, grid.time(state.step_index + 1)));
}

Stepper::Stepper(CoupledSystem system, GeneralizedShishkinMesh mesh, TimeGrid grid, double gamma)
    : system_(std::move(system)),
      mesh_(std::move(mesh)),
      grid_(grid),
      ops_(build_operators(mesh_, system_, grid_.dt, gamma)) {
    const Eigen::Index size =
        static_cast<Eigen::Index>(mesh_.nodes.size()) * static_cast<Eigen::Index>(system_.m());
    // Zero initial data, so L u(., 0) = 0 and W^0 = 0.
    state_ = {GridVector::Zero(size), GridVector::Zero(size), 0};
    f_now_ = sample_source(system_, mesh_, 0.0);
}

double Stepper::advance() {
    if (done()) {
        throw ConfigError("stepper already reached the final time");
    }
    GridVector f_next = sample_source(system_, mesh_, grid_.time(state_.step_index + 1));
    EvolutionState next = cn_step(state_, ops_, f_now_, f_next);
    const double residual = recursion_residual(state_, next, f_now_, f_next, grid_.dt,
                                               static_cast<std::size_t>(system_.m()));
    state_ = std::move(next);
    f_now_ = std::move(f_next);
    return residual;
}

Trajectory integrate(const CoupledSystem& system, const GeneralizedShishkinMesh& mesh,
                     const TimeGrid& grid, const IntegrateOptions& options) {
    Trajectory traj;
    traj.m = static_cast<std::size_t>(system.m());
    traj.nodes = mesh.nodes;

    Stepper stepper(system, mesh, grid, options.gamma);
    if (options.record == Record::all_levels) {
        traj.times.push_back(0.0);
        traj.levels.push_back(stepper.state().u);
    }
    while (!stepper.done()) {
        const int level = stepper.state().step_index;
        const double residual = stepper.advance();
        if (options.check_recursion) {
            const double f_scale = sample_source(system, mesh, grid.time(level)).cwiseAbs().maxCoeff();
            if (!(residual <= 1e-11 * (1.0 + f_scale))) {
                throw NumericalError("W recursion identity violated at step " +
                                     std::to_string(level + 1));
            }
        }
        if (options.record == Record::all_levels) {
            traj.times.push_back(grid.time(stepper.state().step_index));
            traj.levels.push_back(stepper.state().u);
        }
    }
    if (options.record == Record::final_only) {
        traj.times.push_back(grid.time(grid.n_steps));
        traj.levels.push_back(stepper.state().u);
    }
    return traj;
}

}  // namespace sprd
