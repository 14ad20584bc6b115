#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace sprd {

using CouplingFn = std::function<Eigen::MatrixXd(double x)>;
using SourceFn = std::function<Eigen::VectorXd(double x, double t)>;

/// Coupled system u_t - eps u_xx + A(x) u = f(x, t) on (0,1) x (0,T] with
/// homogeneous Dirichlet and initial data. Immutable once built; the
/// evaluators must be pure.
class CoupledSystem {
public:
    CoupledSystem(std::string name, int m, double epsilon, double horizon,
                  CouplingFn coupling, SourceFn source);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }

    [[nodiscard]] Eigen::MatrixXd coupling(double x) const;
    [[nodiscard]] Eigen::VectorXd source(double x, double t) const;

    [[nodiscard]] const CouplingFn& coupling_fn() const noexcept { return coupling_; }
    [[nodiscard]] const SourceFn& source_fn() const noexcept { return source_; }

    /// Same problem with a different perturbation parameter.
    [[nodiscard]] CoupledSystem with_epsilon(double epsilon) const;

    /// False when f(0,0) or f(1,0) is nonzero, i.e. the source does not match
    /// the zero initial/boundary data at the corners. Catalog entries set
    /// this explicitly; nothing checks it symbolically.
    [[nodiscard]] bool corner_compatible() const noexcept { return compatible_; }
    void set_corner_compatible(bool value) noexcept { compatible_ = value; }

private:
    std::string name_;
    int m_;
    double epsilon_;
    double horizon_;
    CouplingFn coupling_;
    SourceFn source_;
    bool compatible_ = true;
};

struct SystemDiagnostics {
    double beta_star = 0.0;
    Eigen::VectorXd diag_sup;
    bool offdiag_ok = false;
    bool rowsum_ok = false;
    bool diag_positive_ok = false;

    [[nodiscard]] bool all_ok() const noexcept {
        return offdiag_ok && rowsum_ok && diag_positive_ok;
    }
};

inline constexpr int kCoefficientSamples = 10001;

/// Samples A on `sample_count` uniform points of [0,1] (endpoints included)
/// and checks the sign and row-sum conditions. Never throws on a failed
/// check; the flags report it.
[[nodiscard]] SystemDiagnostics validate_coupling(const CoupledSystem& system,
                                                  int sample_count = kCoefficientSamples);

/// System for u * exp(-beta0 t): A + beta0 I and f * exp(-beta0 t).
[[nodiscard]] CoupledSystem exponential_shift(const CoupledSystem& system, double beta0);

/// Built-in examples 1..3 with epsilon = 1 (use with_epsilon to choose one).
[[nodiscard]] CoupledSystem builtin_example(int id, double epsilon = 1.0);

/// Example 3's coupling with f = 0; the solution is identically zero.
[[nodiscard]] CoupledSystem zero_source_example(double epsilon = 1.0);

struct CatalogEntry {
    int id;
    std::string summary;
    bool corner_compatible;
};

[[nodiscard]] const std::vector<CatalogEntry>& catalog();

}  // namespace sprd
