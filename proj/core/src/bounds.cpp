#include "kaczlab/bounds.hpp"

#include "kaczlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kaczlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_factor(double f) { return std::clamp(f, 0.0, 1.0); }

BoundCurve geometric_curve(std::string source, std::span<const std::size_t> ks, double factor, double e0_sq,
                           double additive) {
    BoundCurve curve;
    curve.source = std::move(source);
    curve.rate_factor = clamp_factor(factor);
    curve.additive = additive;
    curve.ks.assign(ks.begin(), ks.end());
    curve.values.reserve(ks.size());
    for (const std::size_t k : ks) {
        curve.values.push_back(std::pow(curve.rate_factor, static_cast<double>(k)) * e0_sq + additive);
    }
    return curve;
}

/// 1 - 1/(||a_i||^2 rho_i^2) for every row under the chosen reading.
Vector row_factors(const BoundInputs& in, const SvdOracle& oracle, const DenseMatrix& A,
                   RestrictedNormReading reading) {
    Vector factors(in.m);
    const Basis basis = oracle.row_space_basis();
    for (Eigen::Index i = 0; i < in.m; ++i) {
        double rho = in.restricted_pinv(i);
        if (reading == RestrictedNormReading::Supremum) {
            rho = restricted_sup_norm(A.row(i).transpose(), basis);
        }
        factors(i) = clamp_factor(1.0 - 1.0 / (in.rownorm_sq(i) * rho * rho));
    }
    return factors;
}

void tag_restricted_status(BoundCurve& curve, RestrictedNormReading reading) {
    if (reading == RestrictedNormReading::Literal) {
        curve.status = BoundStatus::DegenerateFactor;
        curve.note = "rows of A lie in N(A)^perp, so ||(a_i^T P_i)^+|| = 1/||a_i|| and the factor is 0";
    } else {
        curve.status = curve.rate_factor >= 1.0 ? BoundStatus::VacuousFactor : BoundStatus::Normal;
        curve.note = "supremum over N(A)^perp is unbounded when rank > 1, so the factor is 1";
    }
}

}  // namespace

std::string_view to_string(BoundStatus status) noexcept {
    switch (status) {
        case BoundStatus::Normal: return "normal";
        case BoundStatus::DegenerateFactor: return "degenerate-factor";
        case BoundStatus::VacuousFactor: return "vacuous-factor";
    }
    return "unknown";
}

BoundInputs make_bound_inputs(const LinearProblem& problem, const SvdOracle& oracle, const Vector& x0,
                              bool use_noisy) {
    problem.validate();
    const DenseMatrix& A = problem.A;
    const Vector& b_used = problem.rhs(use_noisy);

    BoundInputs in;
    in.m = A.rows();
    in.frob_sq = A.squaredNorm();
    in.pinv_norm = oracle.pinv_norm();
    in.sigma_min = oracle.sigma_rank();
    in.kappa = generalized_condition(A, oracle);
    // Squared the same way as a trace's recorded error, so the k = 0 values agree bitwise.
    const double e0 = (x0 - limit_point(oracle, x0, problem.b)).norm();
    in.e0_sq = e0 * e0;
    in.offrange_sq = (b_used - oracle.project_range(b_used)).squaredNorm();
    in.rhs_norm = b_used.norm();
    in.noise_norm = use_noisy ? (b_used - problem.b).norm() : 0.0;

    in.rownorm_sq = A.rowwise().squaredNorm();
    in.max_rownorm_sq = in.rownorm_sq.maxCoeff();
    in.min_rownorm_sq = in.rownorm_sq.minCoeff();

    const Vector scaled = b_used.cwiseQuotient(in.rownorm_sq.cwiseSqrt());
    in.offrange_normalized_sq = (scaled - oracle.project_range(scaled)).squaredNorm();

    // ||B^T a_i|| for all rows at once.
    const Vector projected = (A * oracle.row_space_basis()).rowwise().norm();
    in.restricted_pinv = projected.unaryExpr([](double p) { return p > 0.0 ? 1.0 / p : kInf; });
    return in;
}

std::vector<std::size_t> iteration_grid(std::size_t k_max) {
    std::vector<std::size_t> ks(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        ks[k] = k;
    }
    return ks;
}

BoundCurve rk_bound(const BoundInputs& in, std::span<const std::size_t> ks) {
    const double factor = 1.0 - 1.0 / (in.kappa * in.kappa);
    return geometric_curve("rk", ks, factor, in.e0_sq, in.offrange_sq / in.frob_sq);
}

BoundCurve rk_prior_bound(const BoundInputs& in, std::span<const std::size_t> ks, bool noisy) {
    const double factor = 1.0 - 1.0 / (in.kappa * in.kappa);
    const double additive = noisy ? (in.noise_norm * in.noise_norm) / (in.sigma_min * in.sigma_min) : 0.0;
    auto curve = geometric_curve("rk-prior", ks, factor, in.e0_sq, additive);
    if (noisy) {
        curve.note = "delta read as ||b_noisy - b||";
    }
    return curve;
}

BoundCurve normalized_bound(const BoundInputs& in, std::span<const std::size_t> ks, bool consistent) {
    const double scale = static_cast<double>(in.m) * in.max_rownorm_sq * in.pinv_norm * in.pinv_norm;
    const double factor = 1.0 - 1.0 / scale;
    const double additive = consistent ? 0.0 : in.offrange_normalized_sq / in.frob_sq;
    return geometric_curve("rk-normalized", ks, factor, in.e0_sq, additive);
}

double row_restricted_pinv_norm(const Vector& a, const Basis& rowspace_basis) {
    if (a.size() != rowspace_basis.rows()) {
        fail(ErrorKind::InvalidInput, "row length does not match basis dimension");
    }
    const double projected = (rowspace_basis.transpose() * a).norm();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * a.norm();
    if (!(projected > floor)) {
        fail(ErrorKind::DegenerateRow, "row is orthogonal to the row space");
    }
    return 1.0 / projected;
}

double restricted_sup_norm(const Vector& a, const Basis& rowspace_basis) {
    if (rowspace_basis.cols() > 1) {
        return kInf;
    }
    return row_restricted_pinv_norm(a, rowspace_basis);
}

BoundCurve cyclic_bound(const BoundInputs& in, const SvdOracle& oracle, const DenseMatrix& A,
                        std::span<const std::size_t> ks, RestrictedNormReading reading) {
    if (std::sqrt(in.offrange_sq) > 1e-9 * in.rhs_norm) {
        fail(ErrorKind::InvalidInput, "cyclic sweep estimate requires a consistent system");
    }
    const Vector factors = row_factors(in, oracle, A, reading);
    auto curve = geometric_curve("cyclic", ks, factors.maxCoeff(), in.e0_sq, 0.0);
    tag_restricted_status(curve, reading);
    return curve;
}

BoundCurve block_bound(const BoundInputs& in, const Partition& partition, const SvdOracle& oracle,
                       const DenseMatrix& A, std::span<const std::size_t> ks, bool consistent,
                       BlockBoundForm form, RestrictedNormReading reading) {
    partition.validate(in.m);
    const Vector factors = row_factors(in, oracle, A, reading);
    const double min_block = static_cast<double>(partition.min_block_size());

    if (form == BlockBoundForm::AllRows) {
        double additive = 0.0;
        if (!consistent) {
            Vector rho = in.restricted_pinv;
            if (reading == RestrictedNormReading::Supremum) {
                const Basis basis = oracle.row_space_basis();
                for (Eigen::Index i = 0; i < in.m; ++i) {
                    rho(i) = restricted_sup_norm(A.row(i).transpose(), basis);
                }
            }
            const double max_rho_sq = rho.cwiseAbs2().maxCoeff();
            additive = in.max_rownorm_sq * max_rho_sq / (in.min_rownorm_sq * min_block) * in.offrange_sq;
        }
        auto curve = geometric_curve("block-all-rows", ks, factors.maxCoeff(), in.e0_sq, additive);
        tag_restricted_status(curve, reading);
        return curve;
    }

    if (!consistent) {
        // Row-normalized rate with an (m / #S_sel) delta^2 / sigma_min^2 floor.
        // delta is read as ||(I - Q) b_used|| and #S_sel as the smallest block.
        const double scale = static_cast<double>(in.m) * in.max_rownorm_sq * in.pinv_norm * in.pinv_norm;
        const double additive =
            static_cast<double>(in.m) / min_block * in.offrange_sq / (in.sigma_min * in.sigma_min);
        auto curve = geometric_curve("block", ks, 1.0 - 1.0 / scale, in.e0_sq, additive);
        curve.note = "delta read as ||(I-Q)b||, lambda_min as sigma_min, #S_sel as min block size";
        return curve;
    }

    // Consistent: multiply the active block's factor along the schedule.
    const std::size_t r = partition.size();
    std::vector<double> block_factor(r, 0.0);
    for (std::size_t c = 0; c < r; ++c) {
        for (const Eigen::Index i : partition.blocks[c]) {
            block_factor[c] = std::max(block_factor[c], factors(i));
        }
    }

    BoundCurve curve;
    curve.source = "block";
    curve.rate_factor = *std::max_element(block_factor.begin(), block_factor.end());
    curve.ks.assign(ks.begin(), ks.end());
    curve.values.reserve(ks.size());
    double product = 1.0;
    std::size_t applied = 0;
    for (const std::size_t k : ks) {
        for (; applied < k; ++applied) {
            product *= block_factor[applied % r];
        }
        curve.values.push_back(product * in.e0_sq);
    }
    tag_restricted_status(curve, reading);
    return curve;
}

double IdentityCheck::abs_error() const noexcept { return std::abs(lhs - rhs); }

IdentityCheck step_identity(const LinearProblem& problem, const SvdOracle& oracle, const Vector& x_k,
                            Eigen::Index row, bool use_noisy) {
    const Vector& b = problem.rhs(use_noisy);
    const Vector target = oracle.project_null(x_k) + oracle.generalized_solution(b);
    const Vector a = problem.A.row(row).transpose();
    const double norm_sq = a.squaredNorm();
    const Vector e = x_k - target;
    const double offrange_i = b(row) - oracle.project_range(b)(row);

    IdentityCheck check;
    check.lhs = (kaczmarz_step(x_k, a, b(row)) - target).squaredNorm();
    const double along = a.dot(e);
    check.rhs = e.squaredNorm() - along * along / norm_sq + offrange_i * offrange_i / norm_sq;
    return check;
}

IdentityCheck expected_step_identity(const LinearProblem& problem, const SvdOracle& oracle,
                                     const Vector& x_k, const RowSelector& selector, std::size_t k,
                                     bool use_noisy) {
    if (selector.policy() == RowSelector::Policy::Cyclic) {
        fail(ErrorKind::InvalidInput, "expected step identity needs a random selection policy");
    }
    const DenseMatrix& A = problem.A;
    if (selector.rows() != A.rows()) {
        fail(ErrorKind::InvalidInput, "selector row count does not match the system");
    }
    const Vector& b = problem.rhs(use_noisy);
    const Vector target = oracle.project_null(x_k) + oracle.generalized_solution(b);
    const Vector p = selector.probabilities(k);

    IdentityCheck check;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (p(i) > 0.0) {
            const Vector next = kaczmarz_step(x_k, A.row(i).transpose(), b(i));
            check.lhs += p(i) * (next - target).squaredNorm();
        }
    }

    const Vector e = x_k - target;
    const Vector offrange = b - oracle.project_range(b);
    const Vector norm_sq = A.rowwise().squaredNorm();
    const double frob_sq = norm_sq.sum();
    const bool row_norm_weights =
        selector.policy() == RowSelector::Policy::WeightedRandom &&
        (p - norm_sq / frob_sq).cwiseAbs().maxCoeff() <= 1e-14;

    if (row_norm_weights) {
        check.rhs = e.squaredNorm() - (A * e).squaredNorm() / frob_sq + offrange.squaredNorm() / frob_sq;
    } else {
        const Vector along = A * e;
        check.rhs = e.squaredNorm();
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            check.rhs += p(i) * (offrange(i) * offrange(i) - along(i) * along(i)) / norm_sq(i);
        }
    }
    return check;
}

double angle_gap_bound(const Vector& a1, const Vector& a2, double e_k) {
    const double n1 = a1.norm();
    const double n2 = a2.norm();
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        fail(ErrorKind::ZeroRow, "angle between rows requires nonzero rows");
    }
    const double cosine = a1.dot(a2) / (n1 * n2);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * cosine * cosine)) * e_k;
}

SemiConvergence semi_convergence_scan(const IterationTrace& trace) {
    if (trace.records.empty()) {
        fail(ErrorKind::InvalidInput, "empty trace");
    }
    SemiConvergence scan;
    scan.e_min = trace.records.front().error;
    for (std::size_t j = 1; j < trace.records.size(); ++j) {
        if (trace.records[j].error < scan.e_min) {
            scan.e_min = trace.records[j].error;
            scan.position = j;
        }
    }
    scan.k_star = trace.records[scan.position].k;
    const double last = trace.records.back().error;
    if (scan.e_min > 0.0) {
        scan.rebound = last / scan.e_min;
    } else {
        scan.rebound = last > 0.0 ? kInf : 1.0;
    }
    scan.interior = scan.position > 0 && scan.position + 1 < trace.records.size();
    return scan;
}

}  // namespace kaczlab
