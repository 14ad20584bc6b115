#include "sprd/block_tridiagonal.hpp"

#include "sprd/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace sprd {

BlockTridiagonal::BlockTridiagonal(std::size_t block_size, std::size_t node_count)
    : m_(block_size),
      sub_(node_count, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(block_size),
                                             static_cast<Eigen::Index>(block_size))),
      diag_(sub_),
      sup_(sub_) {
    if (block_size == 0 || node_count < 2) {
        throw ConfigError("block-tridiagonal operator needs m >= 1 and at least two nodes");
    }
    const auto ident = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_),
                                                 static_cast<Eigen::Index>(m_));
    diag_.front() = ident;
    diag_.back() = ident;
}

GridVector BlockTridiagonal::multiply(const GridVector& v) const {
    const auto m = static_cast<Eigen::Index>(m_);
    const std::size_t nodes = node_count();
    if (static_cast<std::size_t>(v.size()) != dimension()) {
        throw ConfigError("grid vector length does not match operator");
    }
    GridVector out(v.size());
    for (std::size_t i = 0; i < nodes; ++i) {
        const auto row = static_cast<Eigen::Index>(i) * m;
        Eigen::VectorXd acc = diag_[i] * v.segment(row, m);
        if (i > 0) {
            acc.noalias() += sub_[i] * v.segment(row - m, m);
        }
        if (i + 1 < nodes) {
            acc.noalias() += sup_[i] * v.segment(row + m, m);
        }
        out.segment(row, m) = acc;
    }
    return out;
}

Eigen::MatrixXd BlockTridiagonal::to_dense() const {
    const auto m = static_cast<Eigen::Index>(m_);
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < node_count(); ++i) {
        const auto r = static_cast<Eigen::Index>(i) * m;
        dense.block(r, r, m, m) = diag_[i];
        if (i > 0) {
            dense.block(r, r - m, m, m) = sub_[i];
        }
        if (i + 1 < node_count()) {
            dense.block(r, r + m, m, m) = sup_[i];
        }
    }
    return dense;
}

double BlockTridiagonal::entry(std::size_t row, std::size_t col) const {
    const std::size_t ri = row / m_;
    const std::size_t ci = col / m_;
    const auto rk = static_cast<Eigen::Index>(row % m_);
    const auto ck = static_cast<Eigen::Index>(col % m_);
    if (ci == ri) {
        return diag_[ri](rk, ck);
    }
    if (ci + 1 == ri) {
        return sub_[ri](rk, ck);
    }
    if (ci == ri + 1) {
        return sup_[ri](rk, ck);
    }
    return 0.0;
}

BlockTridiagonal BlockTridiagonal::minus(const BlockTridiagonal& other) const {
    if (other.m_ != m_ || other.node_count() != node_count()) {
        throw ConfigError("block-tridiagonal shapes differ");
    }
    BlockTridiagonal out = *this;
    for (std::size_t i = 0; i < node_count(); ++i) {
        out.sub_[i] -= other.sub_[i];
        out.diag_[i] -= other.diag_[i];
        out.sup_[i] -= other.sup_[i];
    }
    return out;
}

BlockTridiagonal BlockTridiagonal::scaled(double factor) const {
    BlockTridiagonal out = *this;
    for (std::size_t i = 0; i < node_count(); ++i) {
        out.sub_[i] *= factor;
        out.diag_[i] *= factor;
        out.sup_[i] *= factor;
    }
    return out;
}

void BlockTridiagonal::write_coordinates(std::ostream& out) const {
    const auto m = static_cast<Eigen::Index>(m_);
    const auto precision = out.precision(17);
    auto emit = [&](std::size_t row_node, std::size_t col_node, const Eigen::MatrixXd& block) {
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) {
                if (block(a, b) == 0.0) {
                    continue;
                }
                out << row_node * m_ + static_cast<std::size_t>(a) << '\t'
                    << col_node * m_ + static_cast<std::size_t>(b) << '\t' << block(a, b) << '\n';
            }
        }
    };
    for (std::size_t i = 0; i < node_count(); ++i) {
        if (i > 0) {
            emit(i, i - 1, sub_[i]);
        }
        emit(i, i, diag_[i]);
        if (i + 1 < node_count()) {
            emit(i, i + 1, sup_[i]);
        }
    }
    out.precision(precision);
}

BlockThomasFactorization::BlockThomasFactorization(const BlockTridiagonal& op)
    : m_(op.block_size()) {
    const std::size_t nodes = op.node_count();
    pivots_.reserve(nodes);
    sub_.reserve(nodes);
    gain_.reserve(nodes);
    constexpr double kMinRcond = std::numeric_limits<double>::epsilon();

    Eigen::MatrixXd pivot = op.diag(0);
    for (std::size_t i = 0; i < nodes; ++i) {
        if (i > 0) {
            pivot = op.diag(i) - op.sub(i) * gain_[i - 1];
        }
        if (!pivot.allFinite()) {
            throw SolverError("non-finite pivot block in block-tridiagonal solve", i);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(pivot);
        const double rcond = lu.rcond();
        if (!(rcond > kMinRcond)) {
            throw SolverError("singular pivot block in block-tridiagonal solve", i);
        }
        sub_.push_back(op.sub(i));
        gain_.push_back(i + 1 < nodes ? Eigen::MatrixXd(lu.solve(op.sup(i)))
                                      : Eigen::MatrixXd::Zero(op.sup(i).rows(), op.sup(i).cols()));
        pivots_.push_back(std::move(lu));
    }
}

GridVector BlockThomasFactorization::solve(const GridVector& rhs) const {
    const auto m = static_cast<Eigen::Index>(m_);
    const std::size_t nodes = pivots_.size();
    if (static_cast<std::size_t>(rhs.size()) != dimension()) {
        throw ConfigError("right-hand side length does not match operator");
    }
    GridVector z(rhs.size());
    z.segment(0, m) = pivots_[0].solve(rhs.segment(0, m));
    for (std::size_t i = 1; i < nodes; ++i) {
        const auto r = static_cast<Eigen::Index>(i) * m;
        z.segment(r, m) = pivots_[i].solve(rhs.segment(r, m) - sub_[i] * z.segment(r - m, m));
    }
    for (std::size_t i = nodes - 1; i-- > 0;) {
        const auto r = static_cast<Eigen::Index>(i) * m;
        z.segment(r, m) -= gain_[i] * z.segment(r + m, m);
    }
    return z;
}

GridVector block_thomas_solve(const BlockTridiagonal& op, const GridVector& rhs) {
    return BlockThomasFactorization(op).solve(rhs);
}

}  // namespace sprd
