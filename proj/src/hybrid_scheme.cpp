#include "sprd/hybrid_scheme.hpp"

#include "sprd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sprd {

const char* regime_name(Regime regime) noexcept {
    return regime == Regime::compact ? "compact" : "central";
}

Eigen::VectorXd diagonal_sup(const CoupledSystem& system, const GeneralizedShishkinMesh& mesh) {
    Eigen::VectorXd sup = Eigen::VectorXd::Zero(system.m());
    auto absorb = [&](double x) {
        const Eigen::MatrixXd a = system.coupling(x);
        sup = sup.cwiseMax(a.diagonal().cwiseAbs());
    };
    for (double x : mesh.nodes) {
        absorb(x);
    }
    for (int s = 0; s < kCoefficientSamples; ++s) {
        absorb(static_cast<double>(s) / static_cast<double>(kCoefficientSamples - 1));
    }
    return sup;
}

std::vector<Regime> select_regime(const GeneralizedShishkinMesh& mesh,
                                  std::span<const double> diag_sup, double epsilon, double dt,
                                  double gamma) {
    if (!(dt > 0.0)) {
        throw ConfigError("time step must be positive");
    }
    std::vector<Regime> regimes;
    regimes.reserve(diag_sup.size());
    for (double a_sup : diag_sup) {
        const double a_hat = a_sup + 2.0 / dt;
        const double lhs = gamma * mesh.h_max * mesh.h_max * a_hat;
        regimes.push_back(lhs <= epsilon ? Regime::compact : Regime::central);
    }
    return regimes;
}

WeightTriple quadrature_weights(const GeneralizedShishkinMesh& mesh, Regime regime, std::size_t i) {
    if (i == 0 || i >= mesh.intervals()) {
        throw ConfigError("quadrature weights are defined on interior nodes only");
    }
    if (mesh.in_layer(i)) {
        return {1.0 / 12.0, 5.0 / 6.0, 1.0 / 12.0};
    }
    if (regime == Regime::central) {
        return {0.0, 1.0, 0.0};
    }
    const double hl = mesh.left_width(i);
    const double hr = mesh.right_width(i);
    const double denom = 6.0 * (hl + hr);
    return {(2.0 * hl - hr) / denom, 5.0 / 6.0, (2.0 * hr - hl) / denom};
}

WeightTriple stencil_weights_r(double left_width, double right_width, double epsilon, double dt,
                               const WeightTriple& q, double a_left, double a_centre,
                               double a_right) {
    const double half_dt = 0.5 * dt;
    const double span = left_width + right_width;
    WeightTriple r;
    r.minus = half_dt * (-2.0 * epsilon / (left_width * span) + q.minus * (a_left + 2.0 / dt));
    r.plus = half_dt * (-2.0 * epsilon / (right_width * span) + q.plus * (a_right + 2.0 / dt));
    r.centre = half_dt * (q.minus * a_left + q.centre * a_centre + q.plus * a_right) - r.minus -
               r.plus + 1.0;
    return r;
}

WeightTriple stencil_weights_r(const GeneralizedShishkinMesh& mesh, const CoupledSystem& system,
                               double dt, const WeightTriple& q, std::size_t i, std::size_t k) {
    const auto kk = static_cast<Eigen::Index>(k);
    return stencil_weights_r(mesh.left_width(i), mesh.right_width(i), system.epsilon(), dt, q,
                             system.coupling(mesh.nodes[i - 1])(kk, kk),
                             system.coupling(mesh.nodes[i])(kk, kk),
                             system.coupling(mesh.nodes[i + 1])(kk, kk));
}

namespace {

std::vector<Eigen::MatrixXd> sample_coupling(const CoupledSystem& system,
                                             const GeneralizedShishkinMesh& mesh) {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(mesh.nodes.size());
    for (double x : mesh.nodes) {
        out.push_back(system.coupling(x));
    }
    return out;
}

}  // namespace

StencilWeights compute_weights(const GeneralizedShishkinMesh& mesh, const CoupledSystem& system,
                               double dt, double gamma) {
    if (!(gamma >= 0.0)) {
        throw ConfigError("gamma must be non-negative");
    }
    const std::size_t n = mesh.intervals();
    const auto m = static_cast<std::size_t>(system.m());
    StencilWeights w;
    w.n = n;
    w.m = m;
    w.gamma = gamma;
    const Eigen::VectorXd sup = diagonal_sup(system, mesh);
    w.a_hat_sup = sup.array() + 2.0 / dt;
    w.regime = select_regime(mesh, std::span<const double>(sup.data(), m), system.epsilon(), dt,
                             gamma);
    w.q.assign((n + 1) * m, WeightTriple{});
    w.r.assign((n + 1) * m, WeightTriple{});

    const auto a = sample_coupling(system, mesh);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const WeightTriple q = quadrature_weights(mesh, w.regime[k], i);
            w.q[i * m + k] = q;
            w.r[i * m + k] =
                stencil_weights_r(mesh.left_width(i), mesh.right_width(i), system.epsilon(), dt, q,
                                  a[i - 1](kk, kk), a[i](kk, kk), a[i + 1](kk, kk));
        }
    }
    return w;
}

BlockTridiagonal assemble_lhs(const GeneralizedShishkinMesh& mesh, const CoupledSystem& system,
                              double dt, const StencilWeights& weights) {
    const std::size_t n = mesh.intervals();
    const std::size_t m = weights.m;
    BlockTridiagonal op(m, n + 1);
    const auto a = sample_coupling(system, mesh);
    const double half_dt = 0.5 * dt;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const WeightTriple& q = weights.q_at(i, k);
            const WeightTriple& r = weights.r_at(i, k);
            for (std::size_t j = 0; j < m; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                if (j == k) {
                    op.sub(i)(kk, jj) = r.minus;
                    op.diag(i)(kk, jj) = r.centre;
                    op.sup(i)(kk, jj) = r.plus;
                } else {
                    op.sub(i)(kk, jj) = half_dt * q.minus * a[i - 1](kk, jj);
                    op.diag(i)(kk, jj) = half_dt * q.centre * a[i](kk, jj);
                    op.sup(i)(kk, jj) = half_dt * q.plus * a[i + 1](kk, jj);
                }
            }
        }
    }
    return op;
}

BlockTridiagonal assemble_q_operator(const GeneralizedShishkinMesh& mesh,
                                     const StencilWeights& weights) {
    const std::size_t n = mesh.intervals();
    const std::size_t m = weights.m;
    BlockTridiagonal op(m, n + 1);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const WeightTriple& q = weights.q_at(i, k);
            op.sub(i)(kk, kk) = q.minus;
            op.diag(i)(kk, kk) = q.centre;
            op.sup(i)(kk, kk) = q.plus;
        }
    }
    return op;
}

std::string PositivityReport::describe() const {
    std::ostringstream out;
    out.precision(6);
    out << "# positive-type hypothesis: (N/L)^2 = " << mesh_side
        << (hypothesis_ok ? " > " : " <= ") << coefficient_side
        << " = max_k 4 sigma0^2 (|a_kk| + 2/dt) / 3 -> " << (hypothesis_ok ? "pass" : "fail")
        << '\n';
    for (std::size_t k = 0; k < regimes.size(); ++k) {
        out << "# component " << k + 1 << ": gamma h_max^2 |a_hat| = " << switch_lhs[k]
            << ", regime " << regime_name(regimes[k]) << '\n';
    }
    out << "# sign violations in lhs operator: " << violations.size() << '\n';
    return out.str();
}

PositivityReport verify_positive_type(const GeneralizedShishkinMesh& mesh,
                                      const CoupledSystem& system, double dt, double sigma0,
                                      double gamma) {
    PositivityReport report;
    const Eigen::VectorXd sup = diagonal_sup(system, mesh);
    const double n = static_cast<double>(mesh.intervals());
    report.mesh_side = (n / mesh.l_value) * (n / mesh.l_value);
    report.coefficient_side = 0.0;
    for (Eigen::Index k = 0; k < sup.size(); ++k) {
        report.coefficient_side = std::max(report.coefficient_side,
                                           4.0 * sigma0 * sigma0 * (sup[k] + 2.0 / dt) / 3.0);
    }
    report.hypothesis_ok = report.mesh_side > report.coefficient_side;

    const StencilWeights weights = compute_weights(mesh, system, dt, gamma);
    report.regimes = weights.regime;
    for (std::size_t k = 0; k < weights.m; ++k) {
        const double lhs = gamma * mesh.h_max * mesh.h_max * weights.a_hat_sup[static_cast<Eigen::Index>(k)];
        report.switch_lhs.push_back(lhs);
        if (weights.regime[k] == Regime::compact && lhs > system.epsilon()) {
            report.switch_ok = false;
        }
    }

    const BlockTridiagonal lhs = assemble_lhs(mesh, system, dt, weights);
    const std::size_t m = weights.m;
    for (std::size_t i = 1; i + 1 < lhs.node_count(); ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t row = i * m + k;
            const std::size_t first = (i - 1) * m;
            for (std::size_t col = first; col < first + 3 * m; ++col) {
                const double v = lhs.entry(row, col);
                const bool bad = (col == row) ? !(v > 0.0) : v > 0.0;
                if (bad) {
                    report.violations.push_back({row, col, v});
                }
            }
        }
    }
    return report;
}

SchemeOperators build_operators(const GeneralizedShishkinMesh& mesh, const CoupledSystem& system,
                                double dt, double gamma) {
    SchemeOperators ops;
    ops.dt = dt;
    ops.weights = compute_weights(mesh, system, dt, gamma);
    ops.lhs = assemble_lhs(mesh, system, dt, ops.weights);
    ops.quadrature = assemble_q_operator(mesh, ops.weights);
    ops.lhs_factor = BlockThomasFactorization(ops.lhs);
    return ops;
}

}  // namespace sprd
