/**
 * @file replicates.hpp
 * @brief Independent seeded repetitions of a run and their pointwise
 *        aggregation, used to estimate E[e_k^2].
 */
#pragma once

#include "kaczlab/solvers.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kaczlab {

/// Replicate j runs with seed derive_seed(base_seed, j). Replicates are
/// distributed over `threads` workers; results do not depend on the count.
std::vector<IterationTrace> run_replicates(const LinearProblem& problem, const SvdOracle& oracle,
                                           const RowSelector& selector, const SolverConfig& config,
                                           std::size_t replicates, std::uint64_t base_seed,
                                           bool use_noisy = false, unsigned threads = 1);

struct ErrorAggregate {
    std::vector<std::size_t> ks;
    std::vector<double> mean_sq;
    std::vector<double> min_sq;
    std::vector<double> max_sq;
    std::size_t replicates = 0;
};

/// Pointwise mean, min and max of e_k^2 in replicate order. A trace that
/// stopped early contributes its last recorded error to later grid points.
ErrorAggregate aggregate_squared_errors(std::span<const IterationTrace> traces);

}  // namespace kaczlab
