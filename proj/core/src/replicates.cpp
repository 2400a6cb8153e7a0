#include "kaczlab/replicates.hpp"

#include "kaczlab/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace kaczlab {

std::vector<IterationTrace> run_replicates(const LinearProblem& problem, const SvdOracle& oracle,
                                           const RowSelector& selector, const SolverConfig& config,
                                           std::size_t replicates, std::uint64_t base_seed,
                                           bool use_noisy, unsigned threads) {
    if (replicates < 1) {
        fail(ErrorKind::InvalidInput, "at least one replicate is required");
    }
    std::vector<IterationTrace> traces(replicates);
    std::vector<std::exception_ptr> errors(replicates);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t j = next++; j < replicates; j = next++) {
            try {
                traces[j] = run(problem, oracle, selector.with_seed(derive_seed(base_seed, j)), config,
                                use_noisy);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };

    const unsigned workers = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(replicates));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
    return traces;
}

ErrorAggregate aggregate_squared_errors(std::span<const IterationTrace> traces) {
    if (traces.empty()) {
        fail(ErrorKind::InvalidInput, "no traces to aggregate");
    }
    const auto longest = std::max_element(traces.begin(), traces.end(), [](const auto& a, const auto& b) {
        return a.records.size() < b.records.size();
    });

    ErrorAggregate agg;
    agg.replicates = traces.size();
    for (const auto& rec : longest->records) {
        agg.ks.push_back(rec.k);
    }
    const std::size_t points = agg.ks.size();
    agg.mean_sq.assign(points, 0.0);
    agg.min_sq.assign(points, 0.0);
    agg.max_sq.assign(points, 0.0);

    for (std::size_t p = 0; p < points; ++p) {
        // Extended accumulator: R equal values average back to that value exactly.
        long double sum = 0.0L;
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t j = 0; j < traces.size(); ++j) {
            const auto& recs = traces[j].records;
            if (recs.empty()) {
                fail(ErrorKind::InvalidInput, "trace without records");
            }
            const auto& rec = recs[std::min(p, recs.size() - 1)];
            const double e_sq = rec.error * rec.error;
            sum += e_sq;
            lo = j == 0 ? e_sq : std::min(lo, e_sq);
            hi = j == 0 ? e_sq : std::max(hi, e_sq);
        }
        agg.mean_sq[p] = static_cast<double>(sum / static_cast<long double>(traces.size()));
        agg.min_sq[p] = lo;
        agg.max_sq[p] = hi;
    }
    return agg;
}

}  // namespace kaczlab
