// Experiment driver behind the kaczlab command-line tool.
#pragma once

#include "kaczlab/bounds.hpp"
#include "kaczlab/replicates.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace kaczlab::cli {

enum class Method { Cyclic, Rk, RkNormalized, BlockRk };

std::string_view to_string(Method method) noexcept;

struct ExperimentConfig {
    std::string problem = "phillips";  ///< generator name or problem file path
    Eigen::Index n = 100;
    Eigen::Index m = 0;                ///< synthetic only; 0 means n
    Eigen::Index rank = 0;             ///< synthetic only; 0 means min(m, n)
    bool inconsistent = false;
    double depth = 0.25;
    double delta = 0.0;
    NoiseMode noise_mode = NoiseMode::ConstantOffset;
    Method method = Method::Cyclic;
    Eigen::Index blocks = 2;
    PartitionStrategy partition = PartitionStrategy::Contiguous;
    std::string x0 = "zero";           ///< zero | random | file:PATH
    std::size_t iters = 10000;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    std::size_t record_every = 1;
    unsigned threads = 1;
    std::filesystem::path out = ".";
    std::string command_line;          ///< echoed into CSV metadata

    void validate() const;
};

/// Resolved problem, with noise applied and rows scaled for rk-normalized.
LinearProblem build_problem(const ExperimentConfig& config);
RowSelector build_selector(const LinearProblem& problem, const ExperimentConfig& config);
Vector build_x0(const ExperimentConfig& config, Eigen::Index n);

struct Experiment {
    LinearProblem problem;
    SvdOracle oracle;
    RowSelector selector;
    SolverConfig solver;
    bool use_noisy = false;
    std::vector<IterationTrace> traces;
    ErrorAggregate aggregate;
};

/// Resolves problem, oracle, selector and solver settings without running.
Experiment prepare_experiment(const ExperimentConfig& config);

/// Runs the replicates (a single one for cyclic) and aggregates them.
void execute(Experiment& experiment, const ExperimentConfig& config);

/// Bound curves for the experiment's method, evaluated on `ks`.
std::vector<BoundCurve> bound_curves(const Experiment& experiment, const ExperimentConfig& config,
                                     std::span<const std::size_t> ks);

// -----------------------------------------------------------------------------
// CSV
// -----------------------------------------------------------------------------

inline constexpr std::string_view kCsvSchema = "# kaczlab-csv v1";

/// Decimal with 17 significant digits.
std::string format_double(double value);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_meta(std::string key, std::string value);
    void add_row(std::vector<std::string> cells);

    void write(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

CsvTable trace_table(const IterationTrace& trace, const ExperimentConfig& config, std::uint64_t seed);
CsvTable aggregate_table(const ErrorAggregate& aggregate, const ExperimentConfig& config);
CsvTable bounds_table(const ErrorAggregate& aggregate, std::span<const BoundCurve> curves,
                      const ExperimentConfig& config);

/// Reads k and mean_e_sq back from an aggregate CSV.
ErrorAggregate read_aggregate(const std::filesystem::path& path);

/// gnuplot script plotting aggregate.csv and, when present, bounds.csv.
std::string gnuplot_script(const std::string& title, bool with_bounds);

// -----------------------------------------------------------------------------
// figure reproduction
// -----------------------------------------------------------------------------

struct FigureSpec {
    std::string id;
    std::string problem;
    Method method;
    double delta;
    std::size_t full_scale_iters;
};

/// fig4.1 ... fig4.18; InvalidInput for anything else.
FigureSpec figure_spec(const std::string& id);

/// Entry point. Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kaczlab::cli
