#include "kaczlab/solvers.hpp"

#include "kaczlab/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace kaczlab {

void Partition::validate(Eigen::Index m) const {
    if (blocks.empty()) {
        fail(ErrorKind::InvalidInput, "partition has no blocks");
    }
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    Eigen::Index covered = 0;
    for (const auto& block : blocks) {
        if (block.empty()) {
            fail(ErrorKind::InvalidInput, "partition contains an empty block");
        }
        for (const Eigen::Index i : block) {
            if (i < 0 || i >= m) {
                fail(ErrorKind::InvalidInput, "partition index " + std::to_string(i) + " out of range");
            }
            if (seen[static_cast<std::size_t>(i)]++) {
                fail(ErrorKind::InvalidInput, "row " + std::to_string(i) + " appears in two blocks");
            }
            ++covered;
        }
    }
    if (covered != m) {
        fail(ErrorKind::InvalidInput, "partition does not cover every row");
    }
}

std::size_t Partition::min_block_size() const {
    std::size_t smallest = blocks.empty() ? 0 : blocks.front().size();
    for (const auto& block : blocks) {
        smallest = std::min(smallest, block.size());
    }
    return smallest;
}

Partition partition_rows(Eigen::Index m, Eigen::Index r, PartitionStrategy strategy, std::uint64_t seed) {
    if (r < 1 || r > m) {
        fail(ErrorKind::InvalidInput, "partition needs 1 <= r <= m");
    }
    const auto blocks = static_cast<std::size_t>(r);
    Partition part;
    part.blocks.resize(blocks);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    if (strategy == PartitionStrategy::Strided) {
        for (const Eigen::Index i : order) {
            part.blocks[static_cast<std::size_t>(i % r)].push_back(i);
        }
        return part;
    }

    if (strategy == PartitionStrategy::SeededRandom) {
        Rng rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    const auto base = static_cast<std::size_t>(m / r);
    const auto extra = static_cast<std::size_t>(m % r);
    auto it = order.begin();
    for (std::size_t c = 0; c < blocks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        part.blocks[c].assign(it, it + static_cast<std::ptrdiff_t>(len));
        std::sort(part.blocks[c].begin(), part.blocks[c].end());
        it += static_cast<std::ptrdiff_t>(len);
    }
    return part;
}

RowSelector RowSelector::cyclic(Eigen::Index m) {
    if (m < 1) {
        fail(ErrorKind::InvalidInput, "selector needs at least one row");
    }
    return RowSelector(Policy::Cyclic, m, 0);
}

RowSelector RowSelector::weighted(const Vector& weights, std::uint64_t seed) {
    if (weights.size() < 1) {
        fail(ErrorKind::InvalidInput, "selector needs at least one row");
    }
    if (!weights.allFinite() || (weights.array() < 0.0).any()) {
        fail(ErrorKind::InvalidInput, "selection weights must be finite and nonnegative");
    }
    RowSelector sel(Policy::WeightedRandom, weights.size(), seed);
    sel.cdf_.resize(static_cast<std::size_t>(weights.size()));
    double running = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        running += weights(i);
        sel.cdf_[static_cast<std::size_t>(i)] = running;
    }
    if (!(running > 0.0)) {
        fail(ErrorKind::InvalidInput, "selection weights are all zero");
    }
    return sel;
}

RowSelector RowSelector::row_norm_weighted(const DenseMatrix& A, std::uint64_t seed) {
    return weighted(A.rowwise().squaredNorm(), seed);
}

RowSelector RowSelector::uniform(Eigen::Index m, std::uint64_t seed) {
    if (m < 1) {
        fail(ErrorKind::InvalidInput, "selector needs at least one row");
    }
    return RowSelector(Policy::UniformRandom, m, seed);
}

RowSelector RowSelector::block_cyclic_uniform(Partition partition, std::uint64_t seed) {
    Eigen::Index m = 0;
    for (const auto& block : partition.blocks) {
        m += static_cast<Eigen::Index>(block.size());
    }
    partition.validate(m);
    RowSelector sel(Policy::BlockCyclicUniform, m, seed);
    sel.partition_ = std::move(partition);
    return sel;
}

RowSelector RowSelector::with_seed(std::uint64_t seed) const {
    RowSelector copy = *this;
    copy.seed_ = seed;
    return copy;
}

const Partition& RowSelector::partition() const {
    if (policy_ != Policy::BlockCyclicUniform) {
        fail(ErrorKind::InvalidInput, "selector has no partition");
    }
    return partition_;
}

std::size_t RowSelector::active_block(std::size_t k) const {
    const std::size_t r = partition().size();
    // Steps are numbered from 1 in the block schedule: step k+1 uses
    // l = (k+1) mod r, with l = 0 meaning the last block.
    const std::size_t l = (k + 1) % r;
    return l == 0 ? r - 1 : l - 1;
}

Eigen::Index RowSelector::select(std::size_t k, Rng& rng) const {
    switch (policy_) {
        case Policy::Cyclic:
            return static_cast<Eigen::Index>(k % static_cast<std::size_t>(rows_));
        case Policy::WeightedRandom: {
            const double u = rng.uniform01() * cdf_.back();
            // First row whose cumulative weight exceeds u; zero-weight rows
            // have empty intervals and are never returned.
            const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
            const auto idx = std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                      static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
            return static_cast<Eigen::Index>(idx);
        }
        case Policy::UniformRandom:
            return static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(rows_)));
        case Policy::BlockCyclicUniform: {
            const auto& block = partition_.blocks[active_block(k)];
            return block[rng.index(block.size())];
        }
    }
    return 0;
}

Vector RowSelector::probabilities(std::size_t k) const {
    Vector p = Vector::Zero(rows_);
    switch (policy_) {
        case Policy::Cyclic:
            fail(ErrorKind::InvalidInput, "cyclic selection has no enumerable distribution");
        case Policy::WeightedRandom: {
            double prev = 0.0;
            for (std::size_t i = 0; i < cdf_.size(); ++i) {
                p(static_cast<Eigen::Index>(i)) = (cdf_[i] - prev) / cdf_.back();
                prev = cdf_[i];
            }
            break;
        }
        case Policy::UniformRandom:
            p.setConstant(1.0 / static_cast<double>(rows_));
            break;
        case Policy::BlockCyclicUniform: {
            const auto& block = partition_.blocks[active_block(k)];
            for (const Eigen::Index i : block) {
                p(i) = 1.0 / static_cast<double>(block.size());
            }
            break;
        }
    }
    return p;
}

std::string_view to_string(RowSelector::Policy policy) noexcept {
    switch (policy) {
        case RowSelector::Policy::Cyclic: return "cyclic";
        case RowSelector::Policy::WeightedRandom: return "weighted-random";
        case RowSelector::Policy::UniformRandom: return "uniform-random";
        case RowSelector::Policy::BlockCyclicUniform: return "block-cyclic-uniform";
    }
    return "unknown";
}

Vector kaczmarz_step(const Vector& x, const Vector& a, double b_i) {
    if (a.size() != x.size()) {
        fail(ErrorKind::InvalidInput, "row and iterate lengths differ");
    }
    const double norm_sq = a.squaredNorm();
    if (!(norm_sq > 0.0)) {
        fail(ErrorKind::ZeroRow, "projection onto a zero row");
    }
    return x + ((b_i - a.dot(x)) / norm_sq) * a;
}

LinearProblem normalize_system(const LinearProblem& problem) {
    problem.validate();
    const Vector norms = row_norms(problem.A);
    if (!(norms.minCoeff() > 0.0)) {
        fail(ErrorKind::ZeroRow, "cannot normalize a system with a zero row");
    }
    const Vector scale = norms.cwiseInverse();
    LinearProblem out = problem;
    out.A = scale.asDiagonal() * problem.A;
    out.b = scale.cwiseProduct(problem.b);
    if (problem.b_noisy) {
        out.b_noisy = scale.cwiseProduct(*problem.b_noisy);
    }
    if (!out.label.empty()) {
        out.label += "-normalized";
    }
    return out;
}

Vector limit_point(const SvdOracle& oracle, const Vector& x0, const Vector& b) {
    return oracle.project_null(x0) + oracle.generalized_solution(b);
}

void SolverConfig::validate(Eigen::Index n) const {
    if (x0.size() != n) {
        fail(ErrorKind::InvalidInput, "x0 length does not match column count");
    }
    if (max_iterations < 1) {
        fail(ErrorKind::InvalidInput, "max_iterations must be at least 1");
    }
    if (record_every < 1) {
        fail(ErrorKind::InvalidInput, "record_every must be at least 1");
    }
    if (!(residual_tolerance >= 0.0)) {
        fail(ErrorKind::InvalidInput, "residual tolerance must be nonnegative");
    }
}

IterationTrace run(const LinearProblem& problem, const SvdOracle& oracle, const RowSelector& selector,
                   const SolverConfig& config, bool use_noisy) {
    problem.validate();
    config.validate(problem.cols());
    const DenseMatrix& A = problem.A;
    if (selector.rows() != A.rows()) {
        fail(ErrorKind::InvalidInput, "selector row count does not match the system");
    }
    if (oracle.rows() != A.rows() || oracle.cols() != A.cols()) {
        fail(ErrorKind::InvalidInput, "oracle does not match the system");
    }
    const Vector norm_sq = A.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < norm_sq.size(); ++i) {
        if (!(norm_sq(i) > 0.0)) {
            fail(ErrorKind::ZeroRow, "row " + std::to_string(i) + " is zero");
        }
    }

    const Vector& rhs = problem.rhs(use_noisy);
    const Vector target = limit_point(oracle, config.x0, problem.b);

    IterationTrace trace;
    trace.rows.reserve(config.max_iterations);
    Vector x = config.x0;

    auto record = [&](std::size_t k, Eigen::Index row) {
        IterationRecord rec;
        rec.k = k;
        rec.row = row;
        rec.error = (x - target).norm();
        rec.residual = (A * x - rhs).norm();
        trace.records.push_back(rec);
        if (config.keep_iterates) {
            trace.iterates.push_back(x);
        }
        return rec.residual;
    };

    record(0, -1);
    Rng rng(selector.seed());
    for (std::size_t k = 0; k < config.max_iterations; ++k) {
        const Eigen::Index i = selector.select(k, rng);
        const auto a = A.row(i);
        x += ((rhs(i) - a.dot(x)) / norm_sq(i)) * a.transpose();
        trace.rows.push_back(i);
        trace.iterations = k + 1;

        const std::size_t step = k + 1;
        if (step % config.record_every == 0 || step == config.max_iterations) {
            const double residual = record(step, i);
            if (config.residual_tolerance > 0.0 && residual <= config.residual_tolerance) {
                trace.termination = Termination::ResidualTolerance;
                break;
            }
        }
    }
    trace.final_iterate = std::move(x);
    return trace;
}

}  // namespace kaczlab
