// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "harness.hpp"
#include "kaczlab/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace {

using namespace kaczlab;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Vector random_start(Eigen::Index n, std::uint64_t seed) {
    Rng rng(seed);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i) = rng.normal();
    }
    return x;
}

std::vector<RowSelector> policies(const DenseMatrix& A, std::uint64_t seed) {
    const Eigen::Index m = A.rows();
    return {RowSelector::cyclic(m), RowSelector::row_norm_weighted(A, seed), RowSelector::uniform(m, seed + 1),
            RowSelector::block_cyclic_uniform(partition_rows(m, 3, PartitionStrategy::Contiguous), seed + 2)};
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "kaczlab");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) {
        std::cerr << err.str();
    }
    return code;
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream text;
    text << file.rdbuf();
    return text.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "kaczlab_acceptance";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::vector<std::vector<double>> csv_rows(const fs::path& path, std::vector<std::string>& header) {
    std::ifstream file(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    header.clear();
    while (std::getline(file, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (header.empty()) {
            header = cells;
            continue;
        }
        std::vector<double> values;
        for (const auto& c : cells) {
            values.push_back(std::stod(c));
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

// -----------------------------------------------------------------------------

// Relative to the largest term of the identity so that converged states do not
// divide by zero.
Outcome step_identity_criterion() {
    double worst = 0.0;
    for (bool consistent : {true, false}) {
        const auto p = gen_synthetic(12, 6, 5, consistent, 1);
        const auto oracle = SvdOracle::compute(p.A);
        const Vector offrange = p.b - oracle.project_range(p.b);
        for (const auto& sel : policies(p.A, 10)) {
            Rng rng(sel.seed());
            Vector x = random_start(6, 20);
            for (std::size_t k = 0; k < 1000; ++k) {
                const auto i = sel.select(k, rng);
                const auto check = step_identity(p, oracle, x, i);
                const double e_sq = (x - oracle.project_null(x) - oracle.generalized_solution(p.b)).squaredNorm();
                const double scale =
                    std::max({check.lhs, e_sq, offrange(i) * offrange(i) / p.A.row(i).squaredNorm()});
                worst = std::max(worst, scale > 0.0 ? check.abs_error() / scale : check.abs_error());
                x = kaczmarz_step(x, p.A.row(i).transpose(), p.b(i));
            }
        }
    }
    return {worst <= 1e-9, "max relative error " + fmt(worst)};
}

Outcome expected_identity_criterion() {
    double worst = 0.0;
    for (bool consistent : {true, false}) {
        const auto p = gen_synthetic(12, 6, 5, consistent, 3);
        const auto oracle = SvdOracle::compute(p.A);
        const Basis rowspace = oracle.row_space_basis();
        const Vector anchor = oracle.project_null(random_start(6, 30));
        Rng rng(31);
        const auto selectors = policies(p.A, 40);
        for (int state = 0; state < 50; ++state) {
            Vector coeffs(rowspace.cols());
            for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
                coeffs(j) = rng.normal();
            }
            const Vector x = anchor + rowspace * coeffs;
            for (std::size_t s = 1; s < selectors.size(); ++s) {
                const auto check =
                    expected_step_identity(p, oracle, x, selectors[s], static_cast<std::size_t>(state));
                const double scale = std::max(check.lhs, check.rhs);
                worst = std::max(worst, scale > 0.0 ? check.abs_error() / scale : check.abs_error());
            }
        }
    }
    return {worst <= 1e-9, "max relative error " + fmt(worst)};
}

Outcome manifold_criterion() {
    std::vector<LinearProblem> problems{gen_phillips(100), gen_gravity(100), gen_shaw(100),
                                        gen_synthetic(12, 6, 5, true, 1), gen_synthetic(12, 6, 5, false, 1),
                                        gen_synthetic(30, 40, 10, false, 2)};
    problems.push_back(with_noise(gen_shaw(100), 0.1, NoiseMode::ConstantOffset, 0));
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t q = 0; q < problems.size(); ++q) {
        const auto& p = problems[q];
        const auto oracle = SvdOracle::compute(p.A);
        const Basis N = oracle.null_space_basis();
        SolverConfig c;
        c.x0 = random_start(p.A.cols(), 50 + q);
        c.max_iterations = 2000;
        c.keep_iterates = true;
        const Vector anchor = oracle.project_null(c.x0);
        for (const auto& sel : policies(p.A, 60 + q)) {
            const auto trace = run(p, oracle, sel, c, p.b_noisy.has_value());
            for (const auto& x : trace.iterates) {
                const Vector d = x - anchor;
                if (N.cols() > 0 && d.norm() > 0.0) {
                    worst = std::max(worst, (N.transpose() * d).cwiseAbs().maxCoeff() / d.norm());
                }
                ++checked;
            }
        }
    }
    return {worst <= 1e-10, std::to_string(checked) + " iterates, max relative drift " + fmt(worst)};
}

const std::vector<std::string> kMonteCarloArgs{"bounds", "--problem", "synthetic", "--m", "20", "--n", "10",
                                               "--rank", "8", "--seed", "7", "--method", "rk", "--replicates",
                                               "500", "--iters", "2000", "--threads", "4"};

Outcome monte_carlo_criterion() {
    auto args = kMonteCarloArgs;
    const fs::path out = work_dir() / "monte_carlo";
    args.insert(args.end(), {"--out", out.string()});
    if (cli(args) != 0) {
        return {false, "bounds command failed"};
    }
    std::vector<std::string> header;
    const auto rows = csv_rows(out / "bounds.csv", header);
    const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "bound_rk") - header.begin());
    double worst = 0.0;
    std::size_t worst_k = 0;
    for (const auto& row : rows) {
        const double ratio = row[1] / row[col];
        if (ratio > worst) {
            worst = ratio;
            worst_k = static_cast<std::size_t>(row[0]);
        }
    }
    return {rows.size() == 2001 && worst <= 1.02,
            std::to_string(rows.size()) + " points, max mean/bound " + fmt(worst) + " at k = " +
                std::to_string(worst_k)};
}

Outcome cyclic_limit_criterion() {
    const auto p = gen_synthetic(20, 10, 8, true, 7);
    const auto oracle = SvdOracle::compute(p.A);
    SolverConfig c;
    c.x0 = random_start(10, 70);
    c.max_iterations = 100000;
    c.record_every = 1000;
    const auto trace = run(p, oracle, RowSelector::cyclic(20), c);
    const double ratio = trace.records.back().error / trace.records.front().error;
    const Vector limit = limit_point(oracle, c.x0, p.b);
    const double match = (trace.final_iterate - limit).norm() / limit.norm();
    return {oracle.null_space_basis().cols() > 0 && ratio <= 1e-6 && match <= 1e-5,
            "e_N/e_0 = " + fmt(ratio) + ", relative distance to limit " + fmt(match)};
}

Outcome inconsistent_criterion() {
    const auto p = gen_synthetic(20, 10, 8, false, 7);
    const auto oracle = SvdOracle::compute(p.A);
    SolverConfig c;
    c.x0 = Vector::Zero(10);
    c.max_iterations = 100000;
    const auto trace = run(p, oracle, RowSelector::row_norm_weighted(p.A, 7), c);
    const auto in = make_bound_inputs(p, oracle, c.x0);
    const double floor = std::sqrt(in.offrange_sq) / std::sqrt(in.frob_sq);
    const double level = std::sqrt(rk_bound(in, std::vector<std::size_t>{0}).additive);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& rec : trace.records) {
        if (rec.k >= 80000) {
            lo = std::min(lo, rec.error);
            hi = std::max(hi, rec.error);
        }
    }
    const bool away = lo > 0.5 * floor;
    const bool bounded = hi <= 3.0 * level;
    return {away && bounded, "min e_k / floor = " + fmt(lo / floor) + (away ? " (> 0.5)" : " (<= 0.5)") +
                                 ", max e_k / level = " + fmt(hi / level) + (bounded ? " (<= 3)" : " (> 3)")};
}

Outcome semi_convergence_criterion() {
    std::string detail;
    bool pass = true;
    for (const auto& base : {gen_shaw(100), gen_gravity(100)}) {
        const auto p = with_noise(base, 0.1, NoiseMode::ConstantOffset, 0);
        const auto oracle = SvdOracle::compute(p.A);
        SolverConfig c;
        c.x0 = Vector::Zero(100);
        c.max_iterations = 10000;
        const auto scan = semi_convergence_scan(run(p, oracle, RowSelector::cyclic(100), c, true));
        pass = pass && scan.interior && scan.rebound > 1.0;
        detail += (detail.empty() ? "" : "; ") + p.label + " k* = " + std::to_string(scan.k_star) +
                  " rebound " + fmt(scan.rebound);
    }
    return {pass, detail};
}

Outcome angle_gap_criterion() {
    const auto p = gen_phillips(100);
    const auto oracle = SvdOracle::compute(p.A);
    SolverConfig c;
    c.x0 = Vector::Zero(100);
    c.max_iterations = 300;
    const auto trace = run(p, oracle, RowSelector::cyclic(100), c);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 2 < trace.records.size(); ++k) {
        const double change = std::abs(trace.records[k + 1].error - trace.records[k + 2].error);
        const double gap = angle_gap_bound(p.A.row(trace.rows[k]).transpose(),
                                           p.A.row(trace.rows[k + 1]).transpose(), trace.records[k].error);
        worst = std::max(worst, change - gap);
    }
    return {worst <= 1e-10, "max (change - gap) " + fmt(worst)};
}

Outcome conditioning_criterion() {
    using clock = std::chrono::steady_clock;
    std::string detail;
    bool pass = true;
    const auto check = [&](const LinearProblem& p, bool expect_flag) {
        const auto start = clock::now();
        const auto oracle = SvdOracle::compute(p.A);
        const double seconds = std::chrono::duration<double>(clock::now() - start).count();
        const auto cond = spectral_condition(oracle);
        bool ok = seconds < 60.0;
        if (expect_flag) {
            ok = ok && cond.beyond_numerical_rank && cond.value > 1e15;
        } else {
            ok = ok && cond.value >= std::pow(10.0, 8.5) && cond.value <= std::pow(10.0, 11.5);
        }
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + p.label + " " + fmt(cond.value) +
                  (cond.beyond_numerical_rank ? " flagged" : "") + " (" + fmt(seconds) + " s)";
    };
    check(gen_phillips(1000), false);
    check(gen_gravity(1000), true);
    check(gen_shaw(1000), true);
    return {pass, detail};
}

Outcome ordering_criterion() {
    Rng rng(100);
    double min_gap = std::numeric_limits<double>::infinity();
    double max_equal = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index m = 5 + trial % 11;
        const Eigen::Index n = 3 + trial % 7;
        DenseMatrix A(m, n);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                A(i, j) = rng.normal();
            }
        }
        for (const bool equal_norms : {false, true}) {
            const DenseMatrix M = equal_norms ? DenseMatrix(3.0 * A.rowwise().normalized()) : A;
            LinearProblem p;
            p.A = M;
            p.b = M * Vector::Ones(n);
            const auto oracle = SvdOracle::compute(M);
            const auto in = make_bound_inputs(p, oracle, Vector::Zero(n));
            const std::vector<std::size_t> ks{0};
            const double diff = normalized_bound(in, ks, true).rate_factor - rk_bound(in, ks).rate_factor;
            if (equal_norms) {
                max_equal = std::max(max_equal, std::abs(diff));
            } else {
                min_gap = std::min(min_gap, diff);
            }
        }
    }
    return {min_gap > 1e-12 && max_equal <= 1e-12,
            "min gap (unequal norms) " + fmt(min_gap) + ", max |gap| (equal norms) " + fmt(max_equal)};
}

Outcome determinism_criterion() {
    const std::vector<std::vector<std::string>> commands{
        kMonteCarloArgs,
        {"solve", "--problem", "synthetic", "--m", "20", "--n", "10", "--rank", "8", "--seed", "7", "--x0", "random",
         "--iters", "100000", "--record-every", "1000"},
        {"solve", "--problem", "synthetic", "--m", "20", "--n", "10", "--rank", "8", "--seed", "7", "--inconsistent",
         "--method", "rk", "--iters", "100000", "--record-every", "100"},
        {"solve", "--problem", "shaw", "--n", "100", "--delta", "0.1", "--iters", "10000"},
        {"solve", "--problem", "gravity", "--n", "100", "--delta", "0.1", "--iters", "10000"},
        {"solve", "--problem", "phillips", "--n", "100", "--iters", "300"},
        {"bounds", "--problem", "gravity", "--n", "60", "--method", "block-rk", "--blocks", "4", "--partition",
         "random", "--replicates", "8", "--threads", "3", "--iters", "600", "--seed", "9"},
        {"reproduce", "fig4.16", "--replicates", "4"},
    };
    std::size_t files = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        const fs::path out = work_dir() / ("determinism_" + std::to_string(c));
        auto args = commands[c];
        args.insert(args.end(), {"--out", out.string()});
        std::map<fs::path, std::string> first;
        if (cli(args) != 0) {
            return {false, "command " + std::to_string(c) + " failed"};
        }
        for (const auto& entry : fs::recursive_directory_iterator(out)) {
            if (entry.is_regular_file()) {
                first[entry.path()] = slurp(entry.path());
            }
        }
        if (cli(args) != 0) {
            return {false, "command " + std::to_string(c) + " failed on rerun"};
        }
        for (const auto& [path, bytes] : first) {
            if (slurp(path) != bytes) {
                return {false, path.string() + " differs between runs"};
            }
            ++files;
        }
    }
    return {files > 0, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                           " files identical across reruns"};
}

struct Criterion {
    const char* id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "exact step identity", 5.0, step_identity_criterion},
        {"AC2", "enumerated expectation identity", 5.0, expected_identity_criterion},
        {"AC3", "iterates stay on the affine manifold", 30.0, manifold_criterion},
        {"AC4", "Monte-Carlo mean under the randomized bound", 60.0, monte_carlo_criterion},
        {"AC5", "cyclic limit point", 0.0, cyclic_limit_criterion},
        {"AC6", "inconsistent runs stay near but away from x+", 0.0, inconsistent_criterion},
        {"AC7", "semi-convergence on noisy shaw and gravity", 0.0, semi_convergence_criterion},
        {"AC8", "angle-gap bound", 0.0, angle_gap_criterion},
        {"AC9", "conditioning at n = 1000", 0.0, conditioning_criterion},
        {"AC10", "normalized rate never below the randomized rate", 0.0, ordering_criterion},
        {"AC11", "bitwise-identical CSVs on rerun", 0.0, determinism_criterion},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds >= c.budget_seconds) {
            outcome.pass = false;
            outcome.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        }
        failures += outcome.pass ? 0 : 1;
        std::printf("%s %-5s %s: %s [%.2f s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
