#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the solver's own linear algebra.

#include "sprd/block_tridiagonal.hpp"
#include "sprd/robustness_analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

/// Gaussian elimination with row pivoting on a dense copy.
inline Eigen::VectorXd dense_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) {
                pivot = r;
            }
        }
        if (a(pivot, col) == 0.0) {
            throw std::runtime_error("oracle: singular matrix");
        }
        a.row(col).swap(a.row(pivot));
        std::swap(b[col], b[pivot]);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            a.row(r).tail(n - col) -= factor * a.row(col).tail(n - col);
            b[r] -= factor * b[col];
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (Eigen::Index c = r + 1; c < n; ++c) {
            s -= a(r, c) * x[c];
        }
        x[r] = s / a(r, r);
    }
    return x;
}

/// Newton's method on L e^L - n from L = ln n.
inline double newton_l_star(double n) {
    double l = std::log(n);
    for (int it = 0; it < 100; ++it) {
        const double f = l * std::exp(l) - n;
        const double df = (l + 1.0) * std::exp(l);
        const double step = f / df;
        l -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, l)) {
            break;
        }
    }
    return l;
}

/// Three-point second difference on widths (hl, hr).
inline double second_difference(double vl, double vc, double vr, double hl, double hr) {
    return 2.0 * vl / (hl * (hl + hr)) - 2.0 * vc / (hl * hr) + 2.0 * vr / (hr * (hl + hr));
}

inline Eigen::MatrixXd interior_block(const Eigen::MatrixXd& full, std::size_t m) {
    const auto mm = static_cast<Eigen::Index>(m);
    const Eigen::Index n = full.rows() - 2 * mm;
    return full.block(mm, mm, n, n);
}

/// Random block-tridiagonal operator whose interior rows are strictly
/// diagonally dominant.
inline sprd::BlockTridiagonal random_dominant(std::size_t m, std::size_t nodes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    sprd::BlockTridiagonal op(m, nodes);
    for (std::size_t i = 1; i + 1 < nodes; ++i) {
        for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m); ++r) {
            double off = 0.0;
            for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(m); ++c) {
                op.sub(i)(r, c) = dist(rng);
                op.sup(i)(r, c) = dist(rng);
                off += std::abs(op.sub(i)(r, c)) + std::abs(op.sup(i)(r, c));
                if (c != r) {
                    op.diag(i)(r, c) = dist(rng);
                    off += std::abs(op.diag(i)(r, c));
                }
            }
            op.diag(i)(r, r) = off + 0.5 + std::abs(dist(rng));
        }
    }
    return op;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = dist(rng);
    }
    return v;
}

/// W on all nodes such that one source-free step from (U, W) equals
/// R_N U: Q W = (2/dt)(B - Q) U on interior rows, W = 0 at the boundary.
inline sprd::GridVector consistent_w(const sprd::BlockTridiagonal& lhs,
                                     const sprd::BlockTridiagonal& quadrature,
                                     const sprd::GridVector& u, double dt) {
    const std::size_t m = lhs.block_size();
    const auto mm = static_cast<Eigen::Index>(m);
    const Eigen::MatrixXd b = interior_block(lhs.to_dense(), m);
    const Eigen::MatrixXd q = interior_block(quadrature.to_dense(), m);
    const Eigen::Index n = b.rows();
    const Eigen::VectorXd ui = u.segment(mm, n);
    const Eigen::VectorXd wi = dense_solve(q, (2.0 / dt) * (b - q) * ui);
    sprd::GridVector w = sprd::GridVector::Zero(u.size());
    w.segment(mm, n) = wi;
    return w;
}

/// Dense R_N = B^{-1}(2Q - B) on interior unknowns.
inline Eigen::MatrixXd dense_transition(const sprd::BlockTridiagonal& lhs,
                                        const sprd::BlockTridiagonal& quadrature) {
    const std::size_t m = lhs.block_size();
    const Eigen::MatrixXd b = interior_block(lhs.to_dense(), m);
    const Eigen::MatrixXd q = interior_block(quadrature.to_dense(), m);
    return b.fullPivLu().solve(2.0 * q - b);
}

}  // namespace oracle
