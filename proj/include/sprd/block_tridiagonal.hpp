#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace sprd {

/// Grid vectors are stacked node-major, component-minor: entry (i, k) lives
/// at i * m + k, for nodes 0..N.
using GridVector = Eigen::VectorXd;

/// Block-tridiagonal operator over all N+1 nodes with dense m x m blocks.
/// Boundary rows (nodes 0 and N) are identity with no off-diagonal coupling.
class BlockTridiagonal {
public:
    BlockTridiagonal() = default;
    BlockTridiagonal(std::size_t block_size, std::size_t node_count);

    [[nodiscard]] std::size_t block_size() const noexcept { return m_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return diag_.size(); }
    [[nodiscard]] std::size_t n_interior() const noexcept {
        return node_count() >= 2 ? node_count() - 2 : 0;
    }
    [[nodiscard]] std::size_t dimension() const noexcept { return m_ * node_count(); }

    /// Coupling of row-node i to node i-1 (zero for i = 0).
    [[nodiscard]] Eigen::MatrixXd& sub(std::size_t i) { return sub_[i]; }
    [[nodiscard]] const Eigen::MatrixXd& sub(std::size_t i) const { return sub_[i]; }
    [[nodiscard]] Eigen::MatrixXd& diag(std::size_t i) { return diag_[i]; }
    [[nodiscard]] const Eigen::MatrixXd& diag(std::size_t i) const { return diag_[i]; }
    /// Coupling of row-node i to node i+1 (zero for the last node).
    [[nodiscard]] Eigen::MatrixXd& sup(std::size_t i) { return sup_[i]; }
    [[nodiscard]] const Eigen::MatrixXd& sup(std::size_t i) const { return sup_[i]; }

    [[nodiscard]] GridVector multiply(const GridVector& v) const;
    [[nodiscard]] Eigen::MatrixXd to_dense() const;

    /// Scalar entry (row, col) of the full matrix.
    [[nodiscard]] double entry(std::size_t row, std::size_t col) const;

    /// this - other, blockwise. Shapes must match.
    [[nodiscard]] BlockTridiagonal minus(const BlockTridiagonal& other) const;
    [[nodiscard]] BlockTridiagonal scaled(double factor) const;

    /// Coordinate list `row<TAB>col<TAB>value`, structurally nonzero entries only.
    void write_coordinates(std::ostream& out) const;

private:
    std::size_t m_ = 0;
    std::vector<Eigen::MatrixXd> sub_;
    std::vector<Eigen::MatrixXd> diag_;
    std::vector<Eigen::MatrixXd> sup_;
};

/// Block LU (Thomas) factorization without inter-block pivoting; each pivot
/// block is factored with partial pivoting. Throws SolverError naming the
/// node of a singular pivot.
class BlockThomasFactorization {
public:
    BlockThomasFactorization() = default;
    explicit BlockThomasFactorization(const BlockTridiagonal& op);

    [[nodiscard]] GridVector solve(const GridVector& rhs) const;
    [[nodiscard]] std::size_t dimension() const noexcept { return m_ * pivots_.size(); }

private:
    std::size_t m_ = 0;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> pivots_;
    std::vector<Eigen::MatrixXd> sub_;
    std::vector<Eigen::MatrixXd> gain_;  // pivot^{-1} * sup
};

[[nodiscard]] GridVector block_thomas_solve(const BlockTridiagonal& op, const GridVector& rhs);

}  // namespace sprd
