/**
 * @file bounds.hpp
 * @brief Theoretical error estimates for Kaczmarz-type iterations, evaluated
 *        as curves over an iteration grid, plus the exact one-step identities
 *        they are derived from and two trajectory diagnostics.
 *
 * Every curve bounds E[e_k^2] with e_k = ||x_k - P_N(A) x0 - A^+ b||.
 *
 * Two families of estimates depend on ||(a_i^T P_i)^+||, the pseudoinverse of
 * the row functional restricted to N(A)^perp. For a row of A that quantity is
 * exactly 1 / ||a_i||, which makes the written contraction factor zero. Those
 * curves are therefore emitted with BoundStatus::DegenerateFactor (or
 * VacuousFactor under the supremum reading) and should be read as
 * diagnostics, not guarantees.
 */
#pragma once

#include "kaczlab/linalg.hpp"
#include "kaczlab/problems.hpp"
#include "kaczlab/solvers.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kaczlab {

/// Scalars shared by all bound formulas.
struct BoundInputs {
    double e0_sq = 0.0;            ///< ||x0 - P_N(A) x0 - A^+ b||^2
    double kappa = 1.0;            ///< ||A||_F ||A^+||_2
    double frob_sq = 0.0;          ///< ||A||_F^2
    double offrange_sq = 0.0;      ///< ||(I - Q) b_used||^2
    double offrange_normalized_sq = 0.0;  ///< ||(I - Q) D b_used||^2, D = diag(1/||a_i||)
    double noise_norm = 0.0;       ///< ||b_noisy - b|| (0 on exact data)
    double rhs_norm = 0.0;         ///< ||b_used||
    double pinv_norm = 0.0;        ///< ||A^+||_2
    double sigma_min = 0.0;        ///< smallest singular value above the rank tolerance
    double max_rownorm_sq = 0.0;
    double min_rownorm_sq = 0.0;
    Eigen::Index m = 0;
    Vector rownorm_sq;             ///< per row
    Vector restricted_pinv;        ///< per row, literal ||(a_i^T P_i)^+||
};

BoundInputs make_bound_inputs(const LinearProblem& problem, const SvdOracle& oracle, const Vector& x0,
                              bool use_noisy = false);

enum class BoundStatus {
    Normal,
    /// Contraction factor evaluates to zero; the curve is not a usable bound.
    DegenerateFactor,
    /// Contraction factor evaluates to one; the curve is trivially true.
    VacuousFactor,
};

std::string_view to_string(BoundStatus status) noexcept;

/// Which reading of ||(a_i^T P_i)^+|| to use.
enum class RestrictedNormReading {
    /// Spectral norm of the pseudoinverse of x -> a_i^T x on N(A)^perp.
    Literal,
    /// sup over x in N(A)^perp of ||x|| / |a_i^T x|; infinite when rank > 1.
    Supremum,
};

struct BoundCurve {
    std::string source;
    std::vector<std::size_t> ks;
    std::vector<double> values;
    double rate_factor = 0.0;
    double additive = 0.0;
    BoundStatus status = BoundStatus::Normal;
    std::string note;
};

/// 0, 1, ..., k_max
std::vector<std::size_t> iteration_grid(std::size_t k_max);

/// (1 - 1/kappa^2)^k e0 + ||(I-Q)b||^2 / ||A||_F^2
BoundCurve rk_bound(const BoundInputs& in, std::span<const std::size_t> ks);

/// Earlier randomized-Kaczmarz estimate: (1 - 1/kappa^2)^k e0, plus
/// ||b_noisy - b||^2 / sigma_min^2 when `noisy`.
BoundCurve rk_prior_bound(const BoundInputs& in, std::span<const std::size_t> ks, bool noisy);

/// Estimate expressed through the original rows after left-scaling by
/// D = diag(1/||a_i||): rate 1 - 1/(m max||a_i||^2 ||A^+||^2).
BoundCurve normalized_bound(const BoundInputs& in, std::span<const std::size_t> ks, bool consistent);

/// 1 / ||B^T a||, the pseudoinverse norm of x -> a^T x restricted to span(B).
/// DegenerateRow when a is orthogonal to span(B).
double row_restricted_pinv_norm(const Vector& a, const Basis& rowspace_basis);

/// sup over x in span(B) of ||x|| / |a^T x|: infinite when B has more than
/// one column, row_restricted_pinv_norm otherwise.
double restricted_sup_norm(const Vector& a, const Basis& rowspace_basis);

/// Cyclic sweep estimate with the worst per-row factor
/// max_i (1 - 1/(||a_i||^2 rho_i^2)). InvalidInput on inconsistent data.
BoundCurve cyclic_bound(const BoundInputs& in, const SvdOracle& oracle, const DenseMatrix& A,
                        std::span<const std::size_t> ks,
                        RestrictedNormReading reading = RestrictedNormReading::Literal);

enum class BlockBoundForm {
    /// Per-block factors along the block schedule (consistent) or the
    /// row-normalized rate with an (m / #S) delta^2 / sigma_min^2 floor.
    PerBlock,
    /// Single factor over all rows; ratio-weighted additive term.
    AllRows,
};

BoundCurve block_bound(const BoundInputs& in, const Partition& partition, const SvdOracle& oracle,
                       const DenseMatrix& A, std::span<const std::size_t> ks, bool consistent,
                       BlockBoundForm form = BlockBoundForm::PerBlock,
                       RestrictedNormReading reading = RestrictedNormReading::Literal);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;

    [[nodiscard]] double abs_error() const noexcept;
};

/// One projection step from x_k onto row i: lhs is the measured
/// ||x_{k+1} - target||^2, rhs the closed form
/// e_k^2 - (a_i^T e_k)^2 / ||a_i||^2 + ((I-Q)b)_i^2 / ||a_i||^2.
/// The target is P_N(A) x_k + A^+ b_used, which equals P_N(A) x0 + A^+ b_used
/// for any x_k reachable from x0.
IdentityCheck step_identity(const LinearProblem& problem, const SvdOracle& oracle, const Vector& x_k,
                            Eigen::Index row, bool use_noisy = false);

/// Conditional expectation of the next squared error. lhs enumerates every
/// row with the selector's probabilities at iteration k; rhs is the closed
/// form (matrix form for row-norm weights, block sum otherwise).
/// InvalidInput for the cyclic policy.
IdentityCheck expected_step_identity(const LinearProblem& problem, const SvdOracle& oracle,
                                     const Vector& x_k, const RowSelector& selector, std::size_t k = 0,
                                     bool use_noisy = false);

/// sqrt(2 - 2 cos^2 theta) * e_k, theta the angle between a1 and a2.
double angle_gap_bound(const Vector& a1, const Vector& a2, double e_k);

struct SemiConvergence {
    std::size_t k_star = 0;   ///< iteration index of the smallest error
    std::size_t position = 0; ///< index into trace.records
    double e_min = 0.0;
    double rebound = 1.0;     ///< e_last / e_min
    bool interior = false;    ///< minimum strictly between first and last record
};

SemiConvergence semi_convergence_scan(const IterationTrace& trace);

}  // namespace kaczlab
