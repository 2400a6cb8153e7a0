/**
 * @file solvers.hpp
 * @brief Kaczmarz iteration engine: the single-row projection, row selection
 *        policies, row normalization, row partitions and the traced run loop.
 *
 * Row indices are 0-based throughout the library. The cyclic policy visits
 * row (k mod m) at iteration k = 0, 1, ...; trace files add 1 when printing.
 */
#pragma once

#include "kaczlab/linalg.hpp"
#include "kaczlab/problems.hpp"
#include "kaczlab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace kaczlab {

/// Disjoint nonempty row blocks covering {0, ..., m-1}.
struct Partition {
    std::vector<std::vector<Eigen::Index>> blocks;

    [[nodiscard]] std::size_t size() const noexcept { return blocks.size(); }
    /// Throws InvalidInput unless the blocks partition {0, ..., m-1}.
    void validate(Eigen::Index m) const;
    [[nodiscard]] std::size_t min_block_size() const;
};

enum class PartitionStrategy {
    /// Consecutive runs whose sizes differ by at most one.
    Contiguous,
    /// Row i goes to block i mod r.
    Strided,
    /// Seeded shuffle, then contiguous split. Blocks are stored sorted.
    SeededRandom,
};

Partition partition_rows(Eigen::Index m, Eigen::Index r, PartitionStrategy strategy,
                         std::uint64_t seed = 0);

class RowSelector {
public:
    enum class Policy { Cyclic, WeightedRandom, UniformRandom, BlockCyclicUniform };

    static RowSelector cyclic(Eigen::Index m);
    /// Row i with probability weights(i) / sum(weights).
    static RowSelector weighted(const Vector& weights, std::uint64_t seed);
    /// weighted() with the squared row norms of A.
    static RowSelector row_norm_weighted(const DenseMatrix& A, std::uint64_t seed);
    static RowSelector uniform(Eigen::Index m, std::uint64_t seed);
    static RowSelector block_cyclic_uniform(Partition partition, std::uint64_t seed);

    [[nodiscard]] Policy policy() const noexcept { return policy_; }
    [[nodiscard]] Eigen::Index rows() const noexcept { return rows_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] RowSelector with_seed(std::uint64_t seed) const;
    [[nodiscard]] const Partition& partition() const;
    [[nodiscard]] bool is_random() const noexcept { return policy_ != Policy::Cyclic; }

    /// Row for iteration k (the step producing x_{k+1}).
    Eigen::Index select(std::size_t k, Rng& rng) const;

    /// Block visited at iteration k. The schedule is S_1 first, then block
    /// ((k+1) mod r) with 0 standing for the last block, i.e. S_1, S_2, ...,
    /// S_r, S_1, ...
    [[nodiscard]] std::size_t active_block(std::size_t k) const;

    /// Row distribution used at iteration k. InvalidInput for Cyclic.
    [[nodiscard]] Vector probabilities(std::size_t k) const;

private:
    RowSelector(Policy policy, Eigen::Index rows, std::uint64_t seed)
        : policy_(policy), rows_(rows), seed_(seed) {}

    Policy policy_;
    Eigen::Index rows_;
    std::uint64_t seed_;
    std::vector<double> cdf_;
    Partition partition_;
};

std::string_view to_string(RowSelector::Policy policy) noexcept;

/// Projection of x onto the hyperplane {y : <a, y> = b_i}. ZeroRow if a = 0.
Vector kaczmarz_step(const Vector& x, const Vector& a, double b_i);

/// Left-scales every row and right-hand side by 1 / ||a_i||. x_true is kept.
LinearProblem normalize_system(const LinearProblem& problem);

/// P_N(A) x0 + A^+ b: the limit of the iteration for consistent b.
Vector limit_point(const SvdOracle& oracle, const Vector& x0, const Vector& b);

struct SolverConfig {
    Vector x0;
    std::size_t max_iterations = 1;
    /// Early stop once ||A x_k - b|| <= tolerance, checked on recorded steps.
    /// Zero disables it.
    double residual_tolerance = 0.0;
    std::size_t record_every = 1;
    bool keep_iterates = false;

    void validate(Eigen::Index n) const;
};

struct IterationRecord {
    std::size_t k = 0;
    /// Row used to produce x_k; -1 for the initial iterate.
    Eigen::Index row = -1;
    /// ||x_k - P_N(A) x0 - A^+ b||, always against the exact b.
    double error = 0.0;
    /// ||A x_k - b_used||
    double residual = 0.0;
};

enum class Termination { MaxIterations, ResidualTolerance };

struct IterationTrace {
    std::vector<IterationRecord> records;
    /// Parallel to records when SolverConfig::keep_iterates is set.
    std::vector<Vector> iterates;
    /// Every selected row, in order (rows.size() == iterations).
    std::vector<Eigen::Index> rows;
    Vector final_iterate;
    std::size_t iterations = 0;
    Termination termination = Termination::MaxIterations;
};

/// Runs the iteration on (A, b) or (A, b_noisy). The oracle must be the
/// factorization of problem.A.
IterationTrace run(const LinearProblem& problem, const SvdOracle& oracle, const RowSelector& selector,
                   const SolverConfig& config, bool use_noisy = false);

}  // namespace kaczlab
