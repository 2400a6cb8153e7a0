/**
 * @file problems.hpp
 * @brief Test systems: midpoint-quadrature discretizations of the phillips,
 *        gravity and shaw Fredholm equations, seeded synthetic systems with
 *        prescribed rank, and the additive noise models.
 *
 * Every generator computes b = A * x_true in floating point rather than by
 * analytic integration, so the discrete system is consistent up to rounding.
 */
#pragma once

#include "kaczlab/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace kaczlab {

struct LinearProblem {
    DenseMatrix A;
    Vector b;
    std::optional<Vector> b_noisy;
    std::optional<double> delta;
    std::optional<Vector> x_true;
    std::string label;
    /// False only when b was deliberately pushed out of R(A).
    bool consistent = true;

    [[nodiscard]] Eigen::Index rows() const noexcept { return A.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return A.cols(); }

    /// b_noisy when requested (InvalidInput if absent), b otherwise.
    [[nodiscard]] const Vector& rhs(bool use_noisy) const;

    /// Shape and optional-field checks; throws InvalidInput.
    void validate() const;
};

/// Kernels evaluated pointwise. Exposed for tests and for callers building
/// their own grids.
namespace kernels {
/// 1 + cos(pi u / 3) on |u| < 3, zero elsewhere.
double phillips_phi(double u);
double gravity(double s, double t, double depth);
/// (cos s + cos t)^2 (sin u / u)^2 with u = pi (sin s + sin t); equals
/// (cos s + cos t)^2 where u vanishes.
double shaw(double s, double t);
double shaw_solution(double t);
double gravity_solution(double t);
}  // namespace kernels

LinearProblem gen_phillips(Eigen::Index n);
LinearProblem gen_gravity(Eigen::Index n, double depth = 0.25);
LinearProblem gen_shaw(Eigen::Index n);

/// A = U_r diag(sigma) V_r^T with seeded orthonormal factors and singular
/// values log-spaced over [1e-2, 1]. Inconsistent systems receive a component
/// orthogonal to R(A) with norm 0.1 * ||A x_true||.
LinearProblem gen_synthetic(Eigen::Index m, Eigen::Index n, Eigen::Index rank, bool consistent,
                            std::uint64_t seed);

enum class NoiseMode {
    /// b_i + delta * max|b_i| on every component.
    ConstantOffset,
    /// b_i + delta * max|b_i| * u_i with u_i uniform on [-1, 1].
    SignedUniform,
};

Vector add_noise(const Vector& b, double delta, NoiseMode mode, std::uint64_t seed);

/// Copy of p with b_noisy and delta filled in.
LinearProblem with_noise(LinearProblem p, double delta, NoiseMode mode, std::uint64_t seed);

/// Text format, see problem_io.cpp. Doubles are written with 17 significant
/// digits so a round trip is bit-exact.
void save_problem(const LinearProblem& p, const std::filesystem::path& path);
LinearProblem load_problem(const std::filesystem::path& path);

void write_problem(const LinearProblem& p, std::ostream& out);
LinearProblem read_problem(std::istream& in);

}  // namespace kaczlab
