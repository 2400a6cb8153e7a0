#include "harness.hpp"

#include "kaczlab/error.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace kaczlab::cli {

namespace {

// Stream ids for derive_seed; replicates use 0, 1, 2, ...
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;
constexpr std::uint64_t kStartStream = 0x7830ULL;
constexpr std::uint64_t kPartitionStream = 0x70617274ULL;

const std::map<std::string, Method> kMethods{
    {"cyclic", Method::Cyclic},
    {"rk", Method::Rk},
    {"rk-normalized", Method::RkNormalized},
    {"block-rk", Method::BlockRk},
};

const std::map<std::string, PartitionStrategy> kPartitions{
    {"contiguous", PartitionStrategy::Contiguous},
    {"strided", PartitionStrategy::Strided},
    {"random", PartitionStrategy::SeededRandom},
};

const std::map<std::string, NoiseMode> kNoiseModes{
    {"paper-offset", NoiseMode::ConstantOffset},
    {"signed-uniform", NoiseMode::SignedUniform},
};

std::string_view partition_name(PartitionStrategy s) {
    for (const auto& [name, value] : kPartitions) {
        if (value == s) {
            return name;
        }
    }
    return "unknown";
}

std::string_view noise_name(NoiseMode mode) {
    return mode == NoiseMode::ConstantOffset ? "paper-offset" : "signed-uniform";
}

bool is_generator(const std::string& name) {
    return name == "phillips" || name == "gravity" || name == "shaw" || name == "synthetic";
}

std::string index_string(std::size_t v) { return std::to_string(v); }

void add_config_meta(CsvTable& table, const ExperimentConfig& config, std::uint64_t seed) {
    if (!config.command_line.empty()) {
        table.add_meta("command", config.command_line);
    }
    table.add_meta("seed", std::to_string(seed));
    table.add_meta("problem", config.problem);
    table.add_meta("method", std::string(to_string(config.method)));
    if (config.delta > 0.0) {
        table.add_meta("noise", format_double(config.delta) + " " + std::string(noise_name(config.noise_mode)));
    }
    if (config.method == Method::BlockRk) {
        table.add_meta("partition",
                       std::to_string(config.blocks) + " " + std::string(partition_name(config.partition)));
    }
}

std::filesystem::path replicate_path(const std::filesystem::path& dir, std::size_t j) {
    std::ostringstream name;
    name << "trace_r" << std::setw(3) << std::setfill('0') << j << ".csv";
    return dir / name.str();
}

// Running mean of e_k for the semi-convergence scan of a replicate set.
IterationTrace mean_error_trace(const ErrorAggregate& agg) {
    IterationTrace t;
    for (std::size_t p = 0; p < agg.ks.size(); ++p) {
        t.records.push_back({agg.ks[p], -1, std::sqrt(agg.mean_sq[p]), 0.0});
    }
    return t;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        fail(ErrorKind::InvalidInput, "cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        fail(ErrorKind::InvalidInput, "cannot open " + path.string() + " for writing");
    }
    file << text;
}

void write_solve_outputs(const Experiment& e, const ExperimentConfig& config, bool gnuplot) {
    ensure_directory(config.out);
    for (std::size_t j = 0; j < e.traces.size(); ++j) {
        const std::uint64_t seed = e.selector.is_random() ? derive_seed(config.seed, j) : config.seed;
        trace_table(e.traces[j], config, seed).save(replicate_path(config.out, j));
    }
    aggregate_table(e.aggregate, config).save(config.out / "aggregate.csv");
    if (gnuplot) {
        write_text(config.out / "plot.gp", gnuplot_script(e.problem.label, false));
    }
}

std::vector<BoundCurve> write_bounds_output(const Experiment& e, const ErrorAggregate& agg,
                                            const ExperimentConfig& config, bool gnuplot) {
    auto curves = bound_curves(e, config, agg.ks);
    ensure_directory(config.out);
    bounds_table(agg, curves, config).save(config.out / "bounds.csv");
    if (gnuplot) {
        write_text(config.out / "plot.gp", gnuplot_script(e.problem.label, true));
    }
    return curves;
}

void print_summary(std::ostream& out, const Experiment& e, const ExperimentConfig& config) {
    out << "problem " << e.problem.label << " (" << e.problem.A.rows() << " x " << e.problem.A.cols()
        << "), method " << to_string(config.method) << ", replicates " << e.traces.size() << "\n";
    const auto& agg = e.aggregate;
    out << "e_0^2 = " << format_double(agg.mean_sq.front()) << ", mean e_N^2 = "
        << format_double(agg.mean_sq.back()) << " at k = " << agg.ks.back() << "\n";
    const auto scan = semi_convergence_scan(mean_error_trace(agg));
    out << "semi-convergence: k_star = " << scan.k_star << ", e_min = " << format_double(scan.e_min)
        << ", rebound = " << format_double(scan.rebound) << ", interior = " << (scan.interior ? "yes" : "no")
        << "\n";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput:
        case ErrorKind::ParseError:
            return 1;
        default:
            return 2;
    }
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Cyclic: return "cyclic";
        case Method::Rk: return "rk";
        case Method::RkNormalized: return "rk-normalized";
        case Method::BlockRk: return "block-rk";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (replicates < 1) {
        fail(ErrorKind::InvalidInput, "replicates must be at least 1");
    }
    if (record_every < 1) {
        fail(ErrorKind::InvalidInput, "record-every must be at least 1");
    }
    if (n < 1 || m < 0 || rank < 0) {
        fail(ErrorKind::InvalidInput, "dimensions must be positive");
    }
    if (!(delta >= 0.0)) {
        fail(ErrorKind::InvalidInput, "delta must be nonnegative");
    }
    if (method == Method::BlockRk && blocks < 1) {
        fail(ErrorKind::InvalidInput, "blocks must be at least 1");
    }
    if (threads < 1) {
        fail(ErrorKind::InvalidInput, "threads must be at least 1");
    }
    if (x0 != "zero" && x0 != "random" && !x0.starts_with("file:")) {
        fail(ErrorKind::InvalidInput, "x0 must be zero, random or file:PATH");
    }
}

LinearProblem build_problem(const ExperimentConfig& config) {
    config.validate();
    LinearProblem p;
    if (config.problem == "phillips") {
        p = gen_phillips(config.n);
    } else if (config.problem == "gravity") {
        p = gen_gravity(config.n, config.depth);
    } else if (config.problem == "shaw") {
        p = gen_shaw(config.n);
    } else if (config.problem == "synthetic") {
        const Eigen::Index m = config.m > 0 ? config.m : config.n;
        const Eigen::Index rank = config.rank > 0 ? config.rank : std::min(m, config.n);
        p = gen_synthetic(m, config.n, rank, !config.inconsistent, config.seed);
    } else {
        p = load_problem(config.problem);
    }
    if (config.delta > 0.0) {
        p = with_noise(std::move(p), config.delta, config.noise_mode, derive_seed(config.seed, kNoiseStream));
    }
    if (config.method == Method::RkNormalized) {
        p = normalize_system(p);
    }
    return p;
}

RowSelector build_selector(const LinearProblem& problem, const ExperimentConfig& config) {
    const Eigen::Index m = problem.A.rows();
    switch (config.method) {
        case Method::Cyclic:
            return RowSelector::cyclic(m);
        case Method::Rk:
        case Method::RkNormalized:
            return RowSelector::row_norm_weighted(problem.A, config.seed);
        case Method::BlockRk:
            return RowSelector::block_cyclic_uniform(
                partition_rows(m, config.blocks, config.partition, derive_seed(config.seed, kPartitionStream)),
                config.seed);
    }
    fail(ErrorKind::InvalidInput, "unknown method");
}

Vector build_x0(const ExperimentConfig& config, Eigen::Index n) {
    if (config.x0 == "zero") {
        return Vector::Zero(n);
    }
    if (config.x0 == "random") {
        Rng rng(derive_seed(config.seed, kStartStream));
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i) = rng.normal();
        }
        return x;
    }
    if (config.x0.starts_with("file:")) {
        const std::string path = config.x0.substr(5);
        std::ifstream file(path);
        if (!file) {
            fail(ErrorKind::InvalidInput, "cannot open x0 file " + path);
        }
        std::vector<double> values;
        std::string token;
        while (file >> token) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                fail(ErrorKind::ParseError, "bad value '" + token + "' in x0 file " + path);
            }
            values.push_back(v);
        }
        if (static_cast<Eigen::Index>(values.size()) != n) {
            fail(ErrorKind::InvalidInput, "x0 file has " + std::to_string(values.size()) + " values, expected " +
                                              std::to_string(n));
        }
        return Eigen::Map<const Vector>(values.data(), n);
    }
    fail(ErrorKind::InvalidInput, "x0 must be zero, random or file:PATH");
}

Experiment prepare_experiment(const ExperimentConfig& config) {
    LinearProblem problem = build_problem(config);
    SvdOracle oracle = SvdOracle::compute(problem.A);
    RowSelector selector = build_selector(problem, config);
    SolverConfig solver;
    solver.x0 = build_x0(config, problem.A.cols());
    solver.max_iterations = config.iters;
    solver.record_every = config.record_every;
    const bool use_noisy = problem.b_noisy.has_value();
    return Experiment{std::move(problem), std::move(oracle), std::move(selector), std::move(solver), use_noisy,
                      {}, {}};
}

void execute(Experiment& e, const ExperimentConfig& config) {
    const std::size_t replicates = e.selector.is_random() ? config.replicates : 1;
    if (e.selector.is_random()) {
        e.traces = run_replicates(e.problem, e.oracle, e.selector, e.solver, replicates, config.seed, e.use_noisy,
                                  config.threads);
    } else {
        e.traces = {run(e.problem, e.oracle, e.selector, e.solver, e.use_noisy)};
    }
    e.aggregate = aggregate_squared_errors(e.traces);
}

std::vector<BoundCurve> bound_curves(const Experiment& e, const ExperimentConfig& config,
                                     std::span<const std::size_t> ks) {
    const BoundInputs in = make_bound_inputs(e.problem, e.oracle, e.solver.x0, e.use_noisy);
    const bool consistent = std::sqrt(in.offrange_sq) <= 1e-9 * in.rhs_norm;
    std::vector<BoundCurve> curves{rk_bound(in, ks), normalized_bound(in, ks, consistent),
                                   rk_prior_bound(in, ks, e.use_noisy)};
    if (config.method == Method::Cyclic && consistent) {
        curves.push_back(cyclic_bound(in, e.oracle, e.problem.A, ks));
    }
    if (config.method == Method::BlockRk) {
        curves.push_back(block_bound(in, e.selector.partition(), e.oracle, e.problem.A, ks, consistent));
    }
    return curves;
}

// -----------------------------------------------------------------------------
// CSV
// -----------------------------------------------------------------------------

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_meta(std::string key, std::string value) {
    meta_.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        fail(ErrorKind::InvalidInput, "csv row width does not match header");
    }
    rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
    auto join = [&out](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "," : "") << cells[c];
        }
        out << '\n';
    };
    out << kCsvSchema << '\n';
    for (const auto& [key, value] : meta_) {
        out << "# " << key << ": " << value << '\n';
    }
    join(columns_);
    for (const auto& row : rows_) {
        join(row);
    }
}

void CsvTable::save(const std::filesystem::path& path) const {
    std::ostringstream text;
    write(text);
    write_text(path, text.str());
}

CsvTable trace_table(const IterationTrace& trace, const ExperimentConfig& config, std::uint64_t seed) {
    CsvTable table({"k", "row", "e", "e_sq", "residual"});
    add_config_meta(table, config, seed);
    table.add_meta("termination",
                   trace.termination == Termination::MaxIterations ? "max-iterations" : "residual-tolerance");
    for (const auto& rec : trace.records) {
        table.add_row({index_string(rec.k), std::to_string(rec.row + 1), format_double(rec.error),
                       format_double(rec.error * rec.error), format_double(rec.residual)});
    }
    return table;
}

CsvTable aggregate_table(const ErrorAggregate& agg, const ExperimentConfig& config) {
    CsvTable table({"k", "mean_e_sq", "min_e_sq", "max_e_sq"});
    add_config_meta(table, config, config.seed);
    table.add_meta("replicates", std::to_string(agg.replicates));
    for (std::size_t p = 0; p < agg.ks.size(); ++p) {
        table.add_row({index_string(agg.ks[p]), format_double(agg.mean_sq[p]), format_double(agg.min_sq[p]),
                       format_double(agg.max_sq[p])});
    }
    return table;
}

CsvTable bounds_table(const ErrorAggregate& agg, std::span<const BoundCurve> curves,
                      const ExperimentConfig& config) {
    std::vector<std::string> columns{"k", "empirical_mean_e_sq"};
    for (const auto& c : curves) {
        std::string name = "bound_" + c.source;
        std::replace(name.begin(), name.end(), '-', '_');
        columns.push_back(name);
    }
    CsvTable table(columns);
    add_config_meta(table, config, config.seed);
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        std::string summary = "rate_factor=" + format_double(curve.rate_factor) +
                              " additive=" + format_double(curve.additive) +
                              " status=" + std::string(to_string(curve.status));
        if (!curve.note.empty()) {
            summary += " note=" + curve.note;
        }
        table.add_meta(columns[c + 2], summary);
    }
    for (std::size_t p = 0; p < agg.ks.size(); ++p) {
        std::vector<std::string> row{index_string(agg.ks[p]), format_double(agg.mean_sq[p])};
        for (const auto& curve : curves) {
            row.push_back(format_double(curve.values[p]));
        }
        table.add_row(std::move(row));
    }
    return table;
}

ErrorAggregate read_aggregate(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        fail(ErrorKind::InvalidInput, "cannot open trace " + path.string());
    }
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        return cells;
    };
    auto number = [&path](const std::string& cell, std::size_t line_no) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw ParseError(line_no, "bad value '" + cell + "' in " + path.string());
        }
        return v;
    };

    ErrorAggregate agg;
    std::vector<std::string> header;
    std::string line;
    std::size_t line_no = 0;
    std::size_t k_col = 0;
    std::size_t mean_col = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            if (line.starts_with("# replicates: ")) {
                agg.replicates = std::stoul(line.substr(14));
            }
            continue;
        }
        const auto cells = split(line);
        if (header.empty()) {
            header = cells;
            const auto k_it = std::find(header.begin(), header.end(), "k");
            const auto mean_it = std::find(header.begin(), header.end(), "mean_e_sq");
            if (k_it == header.end() || mean_it == header.end()) {
                throw ParseError(line_no, "aggregate CSV lacks k or mean_e_sq column");
            }
            k_col = static_cast<std::size_t>(k_it - header.begin());
            mean_col = static_cast<std::size_t>(mean_it - header.begin());
            continue;
        }
        if (cells.size() != header.size()) {
            throw ParseError(line_no, "row width does not match header");
        }
        agg.ks.push_back(static_cast<std::size_t>(number(cells[k_col], line_no)));
        const double mean = number(cells[mean_col], line_no);
        agg.mean_sq.push_back(mean);
        agg.min_sq.push_back(mean);
        agg.max_sq.push_back(mean);
    }
    if (agg.ks.empty()) {
        fail(ErrorKind::InvalidInput, "trace " + path.string() + " has no rows");
    }
    return agg;
}

std::string gnuplot_script(const std::string& title, bool with_bounds) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set logscale y\n"
       << "set xlabel 'k'\n"
       << "set ylabel 'e_k^2'\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "' noenhanced\n";
    if (with_bounds) {
        gp << "plot for [c=2:*] 'bounds.csv' using 1:c with lines\n";
    } else {
        gp << "plot 'aggregate.csv' using 1:2 with lines, '' using 1:3 with lines dt 2, '' using 1:4 with lines dt 2\n";
    }
    return gp.str();
}

// -----------------------------------------------------------------------------
// figure reproduction
// -----------------------------------------------------------------------------

FigureSpec figure_spec(const std::string& id) {
    static const char* const kProblems[] = {"phillips", "gravity", "shaw"};
    int number = 0;
    if (id.starts_with("fig4.")) {
        const char* first = id.data() + 5;
        const char* last = id.data() + id.size();
        const auto [ptr, ec] = std::from_chars(first, last, number);
        if (ec != std::errc{} || ptr != last) {
            number = 0;
        }
    }
    if (number < 1 || number > 18) {
        fail(ErrorKind::InvalidInput, "unknown figure id '" + id + "' (expected fig4.1 ... fig4.18)");
    }
    const int group = (number - 1) / 3;
    FigureSpec spec;
    spec.id = id;
    spec.problem = kProblems[(number - 1) % 3];
    spec.method = group < 4 ? Method::Cyclic : Method::Rk;
    spec.delta = (group == 2 || group == 3 || group == 5) ? 0.1 : 0.0;
    spec.full_scale_iters = (group == 1 || group == 3) ? 100000 : 10000;
    return spec;
}

// -----------------------------------------------------------------------------
// entry point
// -----------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    std::string method = "cyclic";
    std::string partition = "contiguous";
    std::string noise_mode = "paper-offset";
    std::string trace_dir;
    std::string positional;
    bool gnuplot = false;

    CLI::App app{"Kaczmarz experiment runner"};
    app.set_config("--config", "", "key = value file mirroring the flags; flags override it");
    app.require_subcommand(1);

    app.add_option("--problem", config.problem, "phillips | gravity | shaw | synthetic | problem file path");
    app.add_option("--n", config.n, "columns (grid size for the integral-equation problems)");
    app.add_option("--m", config.m, "rows of a synthetic problem (default n)");
    app.add_option("--rank", config.rank, "rank of a synthetic problem (default min(m, n))");
    app.add_flag("--inconsistent", config.inconsistent, "synthetic right-hand side off the range of A");
    app.add_option("--depth", config.depth, "gravity source depth");
    app.add_option("--delta", config.delta, "relative noise level");
    app.add_option("--noise-mode", noise_mode, "paper-offset | signed-uniform")
        ->check(CLI::IsMember({"paper-offset", "signed-uniform"}));
    auto* method_opt = app.add_option("--method", method, "cyclic | rk | rk-normalized | block-rk")
                           ->check(CLI::IsMember({"cyclic", "rk", "rk-normalized", "block-rk"}));
    app.add_option("--blocks", config.blocks, "number of row blocks for block-rk");
    app.add_option("--partition", partition, "contiguous | strided | random")
        ->check(CLI::IsMember({"contiguous", "strided", "random"}));
    app.add_option("--x0", config.x0, "zero | random | file:PATH");
    auto* iters_opt = app.add_option("--iters", config.iters, "iteration budget N");
    app.add_option("--replicates", config.replicates, "independent seeded runs R");
    app.add_option("--seed", config.seed, "base seed S");
    auto* every_opt = app.add_option("--record-every", config.record_every, "record every E-th iterate");
    app.add_option("--threads", config.threads, "worker threads for replicates");
    app.add_option("--out", config.out, "output directory (generate: output file)");
    app.add_flag("--gnuplot", gnuplot, "also write a gnuplot script");

    auto* generate = app.add_subcommand("generate", "write a problem file and report its conditioning");
    auto* solve = app.add_subcommand("solve", "run replicates and write trace CSVs");
    auto* bounds = app.add_subcommand("bounds", "compare the empirical mean of e_k^2 with the bound curves");
    auto* reproduce = app.add_subcommand("reproduce", "rerun one of the error-history figures at desk scale");
    for (auto* sub : {generate, solve, bounds, reproduce}) {
        sub->fallthrough();
    }
    generate->add_option("name", positional, "problem generator or file");
    solve->add_option("name", positional, "problem generator or file");
    bounds->add_option("name", positional, "problem generator or file");
    bounds->add_option("--trace", trace_dir, "directory of a completed solve (reads aggregate.csv)");
    reproduce->add_option("figure", positional, "fig4.1 ... fig4.18")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) {
        cmd << (i ? " " : "") << argv[i];
    }
    config.command_line = cmd.str();
    config.method = kMethods.at(method);
    config.partition = kPartitions.at(partition);
    config.noise_mode = kNoiseModes.at(noise_mode);

    try {
        if (*generate) {
            if (!positional.empty()) {
                config.problem = positional;
            }
            if (!is_generator(config.problem)) {
                fail(ErrorKind::InvalidInput, "generate needs a generator name, got '" + config.problem + "'");
            }
            const LinearProblem p = build_problem(config);
            std::filesystem::path path = config.out;
            if (path == ".") {
                path = p.label + ".txt";
            }
            save_problem(p, path);
            const auto oracle = SvdOracle::compute(p.A);
            const auto spectral = spectral_condition(oracle);
            const bool symmetric = p.A.rows() == p.A.cols() &&
                                   (p.A - p.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * p.A.cwiseAbs().maxCoeff();
            out << "wrote " << path.string() << "\n"
                << "m = " << p.A.rows() << ", n = " << p.A.cols() << ", rank = " << oracle.rank()
                << ", symmetric = " << (symmetric ? "yes" : "no") << "\n"
                << "kappa_A = " << format_double(generalized_condition(p.A, oracle)) << "\n"
                << "spectral condition = " << format_double(spectral.value)
                << (spectral.beyond_numerical_rank ? " (beyond numerical rank)" : "") << "\n";
            return 0;
        }

        if (*solve || *bounds) {
            if (!positional.empty()) {
                config.problem = positional;
            }
            Experiment e = prepare_experiment(config);
            if (*solve) {
                execute(e, config);
                write_solve_outputs(e, config, gnuplot);
                print_summary(out, e, config);
                return 0;
            }
            ErrorAggregate agg;
            if (!trace_dir.empty()) {
                agg = read_aggregate(std::filesystem::path(trace_dir) / "aggregate.csv");
            } else {
                execute(e, config);
                agg = e.aggregate;
            }
            const auto curves = write_bounds_output(e, agg, config, gnuplot);
            out << "wrote " << (config.out / "bounds.csv").string() << " (" << agg.ks.size() << " rows)\n";
            for (const auto& c : curves) {
                out << "bound_" << c.source << ": rate factor " << format_double(c.rate_factor) << ", additive "
                    << format_double(c.additive) << ", " << to_string(c.status) << "\n";
            }
            return 0;
        }

        // reproduce
        const FigureSpec fig = figure_spec(positional);
        config.problem = fig.problem;
        config.delta = fig.delta;
        if (method_opt->count() == 0) {
            config.method = fig.method;
        }
        if (iters_opt->count() == 0) {
            const auto scaled = static_cast<double>(fig.full_scale_iters) * static_cast<double>(config.n) / 1000.0;
            config.iters = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(scaled)));
        }
        if (every_opt->count() == 0) {
            config.record_every = std::max<std::size_t>(1, config.iters / 1000);
        }
        config.out = config.out / fig.id;
        Experiment e = prepare_experiment(config);
        execute(e, config);
        write_solve_outputs(e, config, false);
        write_bounds_output(e, e.aggregate, config, gnuplot);
        out << fig.id << ": " << fig.problem << ", " << to_string(config.method) << ", delta = "
            << format_double(fig.delta) << ", N = " << config.iters << " (full scale " << fig.full_scale_iters << ")\n";
        print_summary(out, e, config);
        return 0;
    } catch (const Error& e) {
        err << "kaczlab: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "kaczlab: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace kaczlab::cli
