/**
 * @file linalg.hpp
 * @brief Dense real linear algebra: SVD with a rank decision, Moore-Penrose
 *        solution, orthogonal projectors onto N(A) and R(A), norms and
 *        condition numbers.
 *
 * The SvdOracle is the reference every solver trace and bound is measured
 * against. It is immutable after construction and safe to share between
 * threads.
 */
#pragma once

#include <Eigen/Core>

#include <optional>

namespace kaczlab {

/// Row-major dense matrix of 64-bit floats.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
/// Column-major basis matrix (orthonormal columns).
using Basis = Eigen::MatrixXd;

/// Throws InvalidInput unless every entry is finite and the shape is at least 1x1.
void require_finite(const DenseMatrix& A);

class SvdOracle {
public:
    /// Factorizes A. Without an explicit tolerance the rank cut is
    /// max(m, n) * eps * sigma_1.
    static SvdOracle compute(const DenseMatrix& A, std::optional<double> tolerance = std::nullopt);

    [[nodiscard]] Eigen::Index rows() const noexcept { return U_.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return V_.rows(); }

    /// Descending, length min(m, n).
    [[nodiscard]] const Vector& singular_values() const noexcept { return sigma_; }
    [[nodiscard]] Eigen::Index rank() const noexcept { return rank_; }
    [[nodiscard]] double tolerance() const noexcept { return tolerance_; }
    [[nodiscard]] double sigma_max() const noexcept { return sigma_.size() > 0 ? sigma_(0) : 0.0; }

    [[nodiscard]] const Basis& U() const noexcept { return U_; }
    [[nodiscard]] const Basis& V() const noexcept { return V_; }

    /// First rank() right singular vectors: an orthonormal basis of N(A)^perp.
    [[nodiscard]] Basis row_space_basis() const;
    /// Remaining n - rank() right singular vectors: an orthonormal basis of N(A).
    [[nodiscard]] Basis null_space_basis() const;
    /// First rank() left singular vectors: an orthonormal basis of R(A).
    [[nodiscard]] Basis range_basis() const;

    /// P_N(A) x
    [[nodiscard]] Vector project_null(const Vector& x) const;
    /// Q y, the orthogonal projection onto R(A).
    [[nodiscard]] Vector project_range(const Vector& y) const;
    /// x-dagger = A^+ b, the minimal-norm least-squares solution.
    [[nodiscard]] Vector generalized_solution(const Vector& b) const;

    /// Assembled A^+ (n x m). Intended for small instances.
    [[nodiscard]] Eigen::MatrixXd pseudoinverse() const;
    /// Dense P_N(A) and Q matrices. Intended for small instances.
    [[nodiscard]] Eigen::MatrixXd null_projector() const;
    [[nodiscard]] Eigen::MatrixXd range_projector() const;

    /// ||A^+||_2 = 1 / sigma_rho. DegenerateMatrix when rank() == 0.
    [[nodiscard]] double pinv_norm() const;
    /// Smallest singular value above the rank tolerance.
    [[nodiscard]] double sigma_rank() const;

private:
    SvdOracle() = default;

    Vector sigma_;
    Basis U_;
    Basis V_;
    Eigen::Index rank_ = 0;
    double tolerance_ = 0.0;
};

/// kappa_A = ||A||_F ||A^+||_2, using the tolerance-truncated sigma_rho.
double generalized_condition(const DenseMatrix& A, const SvdOracle& oracle);

struct SpectralCondition {
    double value = 0.0;
    /// True when the raw sigma_min falls below the oracle's rank tolerance, so
    /// the reported value is dominated by rounding noise.
    bool beyond_numerical_rank = false;
};

/// sigma_1 / sigma_min over the untruncated spectrum.
SpectralCondition spectral_condition(const SvdOracle& oracle);

/// Euclidean norm of every row.
Vector row_norms(const DenseMatrix& A);

}  // namespace kaczlab
