#include "kaczlab/linalg.hpp"

#include "kaczlab/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kaczlab {

namespace {

void require_length(const Vector& v, Eigen::Index expected, const char* what) {
    if (v.size() != expected) {
        fail(ErrorKind::InvalidInput, std::string(what) + ": expected length " +
                                          std::to_string(expected) + ", got " +
                                          std::to_string(v.size()));
    }
}

}  // namespace

void require_finite(const DenseMatrix& A) {
    if (A.rows() < 1 || A.cols() < 1) {
        fail(ErrorKind::InvalidInput, "matrix must be at least 1x1");
    }
    if (!A.allFinite()) {
        fail(ErrorKind::InvalidInput, "matrix has non-finite entries");
    }
}

SvdOracle SvdOracle::compute(const DenseMatrix& A, std::optional<double> tolerance) {
    require_finite(A);

    // BDCSVD falls back to Jacobi sweeps below its block size, so one code path
    // serves both tiny fixtures and the n = 1000 test problems.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(A), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) {
        fail(ErrorKind::NumericalFailure, "SVD did not converge");
    }

    SvdOracle oracle;
    oracle.sigma_ = svd.singularValues();
    oracle.U_ = svd.matrixU();
    oracle.V_ = svd.matrixV();
    if (!oracle.sigma_.allFinite()) {
        fail(ErrorKind::NumericalFailure, "SVD produced non-finite singular values");
    }

    const double sigma1 = oracle.sigma_max();
    const auto dim = static_cast<double>(std::max(A.rows(), A.cols()));
    oracle.tolerance_ =
        tolerance.value_or(dim * std::numeric_limits<double>::epsilon() * sigma1);

    Eigen::Index rank = 0;
    while (rank < oracle.sigma_.size() && oracle.sigma_(rank) > oracle.tolerance_) {
        ++rank;
    }
    oracle.rank_ = rank;
    return oracle;
}

Basis SvdOracle::row_space_basis() const { return V_.leftCols(rank_); }

Basis SvdOracle::null_space_basis() const { return V_.rightCols(V_.cols() - rank_); }

Basis SvdOracle::range_basis() const { return U_.leftCols(rank_); }

Vector SvdOracle::project_null(const Vector& x) const {
    require_length(x, cols(), "project_null");
    const auto Vr = V_.leftCols(rank_);
    return x - Vr * (Vr.transpose() * x);
}

Vector SvdOracle::project_range(const Vector& y) const {
    require_length(y, rows(), "project_range");
    const auto Ur = U_.leftCols(rank_);
    return Ur * (Ur.transpose() * y);
}

Vector SvdOracle::generalized_solution(const Vector& b) const {
    require_length(b, rows(), "generalized_solution");
    const auto Ur = U_.leftCols(rank_);
    const auto Vr = V_.leftCols(rank_);
    Vector coeffs = Ur.transpose() * b;
    coeffs.array() /= sigma_.head(rank_).array();
    return Vr * coeffs;
}

Eigen::MatrixXd SvdOracle::pseudoinverse() const {
    const auto Ur = U_.leftCols(rank_);
    const auto Vr = V_.leftCols(rank_);
    return Vr * sigma_.head(rank_).cwiseInverse().asDiagonal() * Ur.transpose();
}

Eigen::MatrixXd SvdOracle::null_projector() const {
    const auto Vr = V_.leftCols(rank_);
    return Eigen::MatrixXd::Identity(cols(), cols()) - Vr * Vr.transpose();
}

Eigen::MatrixXd SvdOracle::range_projector() const {
    const auto Ur = U_.leftCols(rank_);
    return Ur * Ur.transpose();
}

double SvdOracle::sigma_rank() const {
    if (rank_ == 0) {
        fail(ErrorKind::DegenerateMatrix, "matrix has numerical rank 0");
    }
    return sigma_(rank_ - 1);
}

double SvdOracle::pinv_norm() const { return 1.0 / sigma_rank(); }

double generalized_condition(const DenseMatrix& A, const SvdOracle& oracle) {
    return A.norm() * oracle.pinv_norm();
}

SpectralCondition spectral_condition(const SvdOracle& oracle) {
    if (oracle.rank() == 0) {
        fail(ErrorKind::DegenerateMatrix, "spectral condition of a zero matrix");
    }
    const Vector& sigma = oracle.singular_values();
    const double smallest = sigma(sigma.size() - 1);
    SpectralCondition result;
    result.value = smallest > 0.0 ? sigma(0) / smallest : std::numeric_limits<double>::infinity();
    result.beyond_numerical_rank = !(smallest > oracle.tolerance());
    return result;
}

Vector row_norms(const DenseMatrix& A) { return A.rowwise().norm(); }

}  // namespace kaczlab
