#include "sprd/system_catalog.hpp"

#include "sprd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace sprd {

CoupledSystem::CoupledSystem(std::string name, int m, double epsilon, double horizon,
                             CouplingFn coupling, SourceFn source)
    : name_(std::move(name)),
      m_(m),
      epsilon_(epsilon),
      horizon_(horizon),
      coupling_(std::move(coupling)),
      source_(std::move(source)) {
    if (m_ < 2) {
        throw ConfigError("coupled system needs m >= 2, got " + std::to_string(m_));
    }
    if (!(epsilon_ > 0.0 && epsilon_ <= 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1]");
    }
    if (!(horizon_ > 0.0)) {
        throw ConfigError("horizon T must be positive");
    }
    if (!coupling_ || !source_) {
        throw ConfigError("coupling and source evaluators are required");
    }
}

Eigen::MatrixXd CoupledSystem::coupling(double x) const {
    Eigen::MatrixXd a = coupling_(x);
    if (a.rows() != m_ || a.cols() != m_) {
        throw ConfigError("coupling evaluator returned a matrix of the wrong shape");
    }
    return a;
}

Eigen::VectorXd CoupledSystem::source(double x, double t) const {
    Eigen::VectorXd f = source_(x, t);
    if (f.size() != m_) {
        throw ConfigError("source evaluator returned a vector of the wrong length");
    }
    return f;
}

CoupledSystem CoupledSystem::with_epsilon(double epsilon) const {
    CoupledSystem copy(name_, m_, epsilon, horizon_, coupling_, source_);
    copy.compatible_ = compatible_;
    return copy;
}

SystemDiagnostics validate_coupling(const CoupledSystem& system, int sample_count) {
    if (sample_count < 2) {
        throw ConfigError("validate_coupling needs at least 2 sample points");
    }
    const int m = system.m();
    SystemDiagnostics diag;
    diag.diag_sup = Eigen::VectorXd::Zero(m);
    diag.offdiag_ok = true;
    diag.diag_positive_ok = true;
    diag.beta_star = std::numeric_limits<double>::infinity();

    for (int s = 0; s < sample_count; ++s) {
        const double x = static_cast<double>(s) / static_cast<double>(sample_count - 1);
        const Eigen::MatrixXd a = system.coupling(x);
        for (int i = 0; i < m; ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < m; ++j) {
                row_sum += a(i, j);
                if (i != j && a(i, j) > 0.0) {
                    diag.offdiag_ok = false;
                }
            }
            if (!(a(i, i) > 0.0)) {
                diag.diag_positive_ok = false;
            }
            diag.diag_sup[i] = std::max(diag.diag_sup[i], std::abs(a(i, i)));
            diag.beta_star = std::min(diag.beta_star, row_sum);
        }
    }
    diag.rowsum_ok = diag.beta_star > 0.0;
    return diag;
}

CoupledSystem exponential_shift(const CoupledSystem& system, double beta0) {
    if (!(beta0 >= 0.0)) {
        throw ConfigError("exponential shift needs beta0 >= 0");
    }
    auto coupling = [base = system.coupling_fn(), beta0](double x) {
        Eigen::MatrixXd a = base(x);
        a.diagonal().array() += beta0;
        return a;
    };
    auto source = [base = system.source_fn(), beta0](double x, double t) {
        Eigen::VectorXd f = base(x, t);
        return Eigen::VectorXd(f * std::exp(-beta0 * t));
    };
    std::ostringstream name;
    name << system.name() << " (shift " << beta0 << ")";
    CoupledSystem shifted(name.str(), system.m(), system.epsilon(), system.horizon(),
                          std::move(coupling), std::move(source));
    shifted.set_corner_compatible(system.corner_compatible());
    return shifted;
}

namespace {

CoupledSystem example_one(double epsilon) {
    auto coupling = [](double x) {
        Eigen::MatrixXd a(2, 2);
        a << 2.0 + x, -(1.0 + x),
             -(1.0 + x), std::exp(x) + 1.0;
        return a;
    };
    auto source = [](double x, double /*t*/) {
        const double v = x * x * (1.0 - x) * (1.0 - x);
        return Eigen::VectorXd::Constant(2, v).eval();
    };
    return {"example-1", 2, epsilon, 1.0, coupling, source};
}

CoupledSystem example_two(double epsilon) {
    auto coupling = [](double x) {
        Eigen::MatrixXd a(3, 3);
        a << 3.0, -(1.0 - x), -(1.0 - x),
             -2.0, 4.0 + x, -1.0,
             -2.0, -3.0, 6.0 + x;
        return a;
    };
    auto source = [](double x, double t) {
        const double bump = 16.0 * x * x * (1.0 - x) * (1.0 - x);
        Eigen::VectorXd f(3);
        f << bump, t * t * t, bump;
        return f;
    };
    return {"example-2", 3, epsilon, 1.0, coupling, source};
}

Eigen::MatrixXd constant_coupling(double /*x*/) {
    Eigen::MatrixXd a(2, 2);
    a << 2.0, -1.0,
         -1.0, 2.0;
    return a;
}

CoupledSystem example_three(double epsilon) {
    auto source = [](double /*x*/, double /*t*/) { return Eigen::VectorXd::Ones(2).eval(); };
    CoupledSystem sys("example-3", 2, epsilon, 1.0, constant_coupling, source);
    // f(0,0) = f(1,0) = 1 while u vanishes there.
    sys.set_corner_compatible(false);
    return sys;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {1, "M=2, A=[[2+x, -(1+x)], [-(1+x), e^x+1]], f=(x^2(1-x)^2, x^2(1-x)^2)", true},
        {2, "M=3, x-dependent coupling, f=(16x^2(1-x)^2, t^3, 16x^2(1-x)^2)", true},
        {3, "M=2, A=[[2, -1], [-1, 2]], f=(1, 1); violates corner compatibility", false},
    };
    return entries;
}

CoupledSystem builtin_example(int id, double epsilon) {
    switch (id) {
        case 1: return example_one(epsilon);
        case 2: return example_two(epsilon);
        case 3: return example_three(epsilon);
        default: break;
    }
    std::ostringstream msg;
    msg << "unknown example id " << id << "; available:";
    for (const auto& entry : catalog()) {
        msg << "\n  " << entry.id << ": " << entry.summary;
    }
    throw ConfigError(msg.str());
}

CoupledSystem zero_source_example(double epsilon) {
    auto source = [](double /*x*/, double /*t*/) { return Eigen::VectorXd::Zero(2).eval(); };
    return {"zero-source", 2, epsilon, 1.0, constant_coupling, source};
}

}  // namespace sprd
