#include "sprd/arnoldi.hpp"

#include "sprd/errors.hpp"

#include <arpack/arpack.hpp>

#include <algorithm>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace sprd {

namespace {

std::mutex& arpack_mutex() {
    static std::mutex mutex;
    return mutex;
}

}  // namespace

ArnoldiResult arnoldi_eigenvalues(std::size_t dim, const LinearMap& op, ArnoldiWhich which,
                                  const ArnoldiOptions& options) {
    const auto n = static_cast<a_int>(dim);
    if (n < 3) {
        throw ConfigError("Arnoldi iteration needs dimension >= 3");
    }
    const a_int nev = std::clamp<a_int>(options.nev, 1, n - 2);
    const a_int ncv = std::clamp<a_int>(options.ncv, nev + 2, n);
    const a_int lworkl = 3 * ncv * ncv + 6 * ncv;
    const char* selector = which == ArnoldiWhich::largest_real ? "LR" : "LM";

    std::vector<double> resid(dim);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& r : resid) {
        r = dist(rng);
    }
    std::vector<double> v(dim * static_cast<std::size_t>(ncv));
    std::vector<double> workd(3 * dim);
    std::vector<double> workl(static_cast<std::size_t>(lworkl));
    a_int iparam[11] = {};
    a_int ipntr[14] = {};
    iparam[0] = 1;
    iparam[2] = options.max_restarts;
    iparam[6] = 1;

    Eigen::VectorXd x(n);
    Eigen::VectorXd y(n);
    a_int ido = 0;
    a_int info = 1;

    std::lock_guard<std::mutex> lock(arpack_mutex());
    for (;;) {
        arpack::internal::dnaupd_c(&ido, "I", n, selector, nev, options.tol, resid.data(), ncv,
                                   v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl,
                                   &info);
        if (ido != -1 && ido != 1) {
            break;
        }
        std::copy_n(workd.data() + ipntr[0] - 1, dim, x.data());
        op(x, y);
        std::copy_n(y.data(), dim, workd.data() + ipntr[1] - 1);
    }
    if (info < 0) {
        throw NumericalError("ARPACK dnaupd failed with info " + std::to_string(info));
    }
    const int restarts = iparam[2];
    if (iparam[4] < 1) {
        throw NumericalError("Arnoldi iteration converged no Ritz values after " +
                             std::to_string(restarts) + " restarts");
    }

    std::vector<a_int> select(static_cast<std::size_t>(ncv));
    std::vector<double> dr(static_cast<std::size_t>(nev + 1));
    std::vector<double> di(static_cast<std::size_t>(nev + 1));
    std::vector<double> workev(3 * static_cast<std::size_t>(ncv));
    a_int einfo = 0;
    arpack::internal::dneupd_c(0, "A", select.data(), dr.data(), di.data(), v.data(), n, 0.0, 0.0,
                               workev.data(), "I", n, selector, nev, options.tol, resid.data(), ncv,
                               v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl,
                               &einfo);
    if (einfo != 0) {
        throw NumericalError("ARPACK dneupd failed with info " + std::to_string(einfo));
    }
    ArnoldiResult result;
    result.restarts = restarts;
    const a_int converged = std::min<a_int>(iparam[4], nev + 1);
    result.values.resize(converged);
    for (a_int i = 0; i < converged; ++i) {
        result.values[i] = {dr[static_cast<std::size_t>(i)], di[static_cast<std::size_t>(i)]};
    }
    return result;
}

}  // namespace sprd
