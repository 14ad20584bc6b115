#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace sprd {

enum class ArnoldiWhich { largest_magnitude, largest_real };

struct ArnoldiOptions {
    int nev = 1;
    int ncv = 20;
    double tol = 1e-6;  ///< relative Ritz residual
    int max_restarts = 5000;
    std::uint64_t seed = 0x5eed5eedULL;
};

struct ArnoldiResult {
    Eigen::VectorXcd values;  ///< converged Ritz values, unordered
    int restarts = 0;
};

/// y = Op x for x, y of length dim.
using LinearMap = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

/// Extreme eigenvalues of a nonsymmetric operator by implicitly restarted
/// Arnoldi (ARPACK). Calls are serialized process-wide. Throws
/// NumericalError when fewer than one Ritz value converges.
[[nodiscard]] ArnoldiResult arnoldi_eigenvalues(std::size_t dim, const LinearMap& op,
                                                ArnoldiWhich which,
                                                const ArnoldiOptions& options = {});

}  // namespace sprd
