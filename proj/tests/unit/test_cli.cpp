#include "harness.hpp"
#include "kaczlab/error.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace kaczlab::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "kaczlab");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kaczlab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream text;
    text << file.rdbuf();
    return text.str();
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        EXPECT_NE(it, header.end()) << name;
        return static_cast<std::size_t>(it - header.begin());
    }
};

Table read_table(const fs::path& path) {
    std::ifstream file(path);
    Table t;
    std::string line;
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
        if (t.header.empty()) {
            t.header = cells;
        } else {
            std::vector<double> values;
            for (const auto& c : cells) {
                values.push_back(std::stod(c));
            }
            t.rows.push_back(values);
        }
    }
    return t;
}

TEST(Cli, GenerateWritesLoadableProblem) {
    const auto dir = scratch("generate");
    const auto path = (dir / "shaw.txt").string();
    const auto r = invoke({"generate", "shaw", "--n", "100", "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("m = 100, n = 100"), std::string::npos);
    EXPECT_NE(r.out.find("symmetric = yes"), std::string::npos);
    EXPECT_NE(r.out.find("kappa_A = "), std::string::npos);
    const auto p = load_problem(path);
    EXPECT_EQ(p.A, gen_shaw(100).A);
}

TEST(Cli, GenerateOddShawFails) {
    const auto r = invoke({"generate", "shaw", "--n", "7", "--out", (scratch("odd") / "x.txt").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("even"), std::string::npos);
}

TEST(Cli, GeneratePhillipsReportsConditionNearTenToTheTen) {
    const auto r = invoke({"generate", "phillips", "--n", "1000", "--out", (scratch("ph") / "p.txt").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto pos = r.out.find("spectral condition = ");
    ASSERT_NE(pos, std::string::npos);
    const double cond = std::stod(r.out.substr(pos + 21));
    EXPECT_GE(cond, 1e9);
    EXPECT_LE(cond, 1e11);
    EXPECT_EQ(r.out.find("beyond numerical rank"), std::string::npos);
}

TEST(Cli, CsvSchemaAndMetadata) {
    const auto dir = scratch("schema");
    const auto r = invoke({"solve", "--problem", "phillips", "--n", "20", "--iters", "50", "--seed", "3", "--out",
                           dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name : {"trace_r000.csv", "aggregate.csv"}) {
        std::ifstream file(dir / name);
        std::string first;
        std::getline(file, first);
        EXPECT_EQ(first, "# kaczlab-csv v1");
        std::string line;
        bool saw_command = false;
        bool saw_seed = false;
        while (std::getline(file, line) && line.front() == '#') {
            saw_command |= line.starts_with("# command: kaczlab solve");
            saw_seed |= line == "# seed: 3";
        }
        EXPECT_TRUE(saw_command);
        EXPECT_TRUE(saw_seed);
    }
    EXPECT_EQ(read_table(dir / "trace_r000.csv").header,
              (std::vector<std::string>{"k", "row", "e", "e_sq", "residual"}));
    EXPECT_EQ(read_table(dir / "aggregate.csv").header,
              (std::vector<std::string>{"k", "mean_e_sq", "min_e_sq", "max_e_sq"}));
}

TEST(Cli, CyclicPhillipsErrorIsNonIncreasing) {
    const auto dir = scratch("monotone");
    const auto r = invoke({"solve", "--problem", "phillips", "--n", "100", "--method", "cyclic", "--iters", "10000",
                           "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto agg = read_aggregate(dir / "aggregate.csv");
    ASSERT_EQ(agg.ks.size(), 10001u);
    for (std::size_t p = 1; p < agg.ks.size(); ++p) {
        EXPECT_LE(std::sqrt(agg.mean_sq[p]), std::sqrt(agg.mean_sq[p - 1]) + 1e-12) << "k = " << agg.ks[p];
    }
}

TEST(Cli, ReplicatesDifferButAggregateIsDeterministic) {
    const auto dir = scratch("replicates");
    const std::vector<std::string> args{"solve", "--problem", "synthetic", "--m", "12", "--n", "6", "--method", "rk",
                                        "--replicates", "2", "--seed", "11", "--iters", "200", "--out",
                                        dir.string()};
    ASSERT_EQ(invoke(args).code, 0);
    EXPECT_NE(read_table(dir / "trace_r000.csv").rows, read_table(dir / "trace_r001.csv").rows);
    const auto first = slurp(dir / "aggregate.csv");
    ASSERT_EQ(invoke(args).code, 0);
    EXPECT_EQ(slurp(dir / "aggregate.csv"), first);
}

TEST(Cli, CyclicRunsASingleReplicate) {
    const auto dir = scratch("cyclic_single");
    const auto r = invoke({"solve", "--problem", "phillips", "--n", "10", "--replicates", "5", "--iters", "20",
                           "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "trace_r000.csv"));
    EXPECT_FALSE(fs::exists(dir / "trace_r001.csv"));
}

TEST(Cli, NoisyShawShowsSemiConvergence) {
    const auto dir = scratch("semi");
    const auto r = invoke({"solve", "--problem", "shaw", "--n", "100", "--delta", "0.1", "--iters", "10000",
                           "--record-every", "10", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("interior = yes"), std::string::npos) << r.out;
}

TEST(Cli, BoundsFirstRowStartsAtInitialError) {
    const auto dir = scratch("bounds");
    const auto r = invoke({"bounds", "--problem", "synthetic", "--m", "20", "--n", "10", "--rank", "8", "--seed",
                           "7", "--method", "rk", "--replicates", "20", "--iters", "500", "--record-every", "50",
                           "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = read_table(dir / "bounds.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"k", "empirical_mean_e_sq", "bound_rk", "bound_rk_normalized",
                                                  "bound_rk_prior"}));
    ASSERT_EQ(t.rows.size(), 11u);
    const auto& first = t.rows.front();
    EXPECT_EQ(first[0], 0.0);
    EXPECT_EQ(first[1], first[4]);  // prior bound on exact data has no additive term
    EXPECT_GE(first[2], first[1]);
    EXPECT_GE(first[3], first[1]);
}

TEST(Cli, EqualRowNormsGiveEqualRandomizedBounds) {
    const auto dir = scratch("equal_norms");
    const auto r = invoke({"bounds", "--problem", "synthetic", "--m", "15", "--n", "8", "--method",
                           "rk-normalized", "--iters", "300", "--record-every", "30", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = read_table(dir / "bounds.csv");
    const auto rk = t.column("bound_rk");
    const auto normalized = t.column("bound_rk_normalized");
    for (const auto& row : t.rows) {
        EXPECT_NEAR(row[rk], row[normalized], 1e-12 * row[rk]);
    }
}

TEST(Cli, BoundsFromCompletedSolve) {
    const auto dir = scratch("bounds_from_trace");
    const std::vector<std::string> common{"--problem", "phillips", "--n", "30", "--iters", "90", "--record-every",
                                          "30", "--out", dir.string()};
    std::vector<std::string> solve{"solve"};
    solve.insert(solve.end(), common.begin(), common.end());
    ASSERT_EQ(invoke(solve).code, 0);
    std::vector<std::string> bounds{"bounds", "--trace", dir.string()};
    bounds.insert(bounds.end(), common.begin(), common.end());
    const auto r = invoke(bounds);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = read_table(dir / "bounds.csv");
    const auto agg = read_table(dir / "aggregate.csv");
    ASSERT_EQ(t.rows.size(), agg.rows.size());
    for (std::size_t p = 0; p < t.rows.size(); ++p) {
        EXPECT_EQ(t.rows[p][1], agg.rows[p][1]);
    }
    EXPECT_NE(std::find(t.header.begin(), t.header.end(), "bound_cyclic"), t.header.end());
}

TEST(Cli, BoundsWithMissingTraceFails) {
    const auto dir = scratch("missing");
    const auto r = invoke({"bounds", "--trace", (dir / "absent").string(), "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, NumericalFailureExitsWithTwo) {
    const auto dir = scratch("zero_row");
    {
        std::ofstream file(dir / "zero.txt");
        file << "kaczlab-problem v1\n2 2\n1 0\n0 0\nb\n1 0\n";
    }
    const auto r = invoke({"solve", "--problem", (dir / "zero.txt").string(), "--iters", "5", "--out",
                           dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("ZeroRow"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitWithOne) {
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"solve", "--method", "sideways"}).code, 1);
    EXPECT_EQ(invoke({"solve", "--iters", "many"}).code, 1);
    EXPECT_EQ(invoke({"reproduce", "fig9.1"}).code, 1);
    EXPECT_EQ(invoke({"solve", "--replicates", "0", "--out", scratch("zero_r").string()}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto dir = scratch("config");
    {
        std::ofstream file(dir / "run.ini");
        file << "problem = phillips\nn = 12\niters = 999\nrecord-every = 3\n";
    }
    const auto r = invoke({"solve", "--config", (dir / "run.ini").string(), "--iters", "30", "--out",
                           dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = read_table(dir / "aggregate.csv");
    ASSERT_EQ(t.rows.size(), 11u);
    EXPECT_EQ(t.rows.back()[0], 30.0);
    EXPECT_NE(r.out.find("12 x 12"), std::string::npos);
}

TEST(Cli, FigureMapping) {
    const auto f1 = figure_spec("fig4.1");
    EXPECT_EQ(f1.problem, "phillips");
    EXPECT_EQ(f1.method, Method::Cyclic);
    EXPECT_EQ(f1.delta, 0.0);
    EXPECT_EQ(f1.full_scale_iters, 10000u);

    const auto f5 = figure_spec("fig4.5");
    EXPECT_EQ(f5.problem, "gravity");
    EXPECT_EQ(f5.full_scale_iters, 100000u);

    const auto f7 = figure_spec("fig4.7");
    EXPECT_EQ(f7.problem, "phillips");
    EXPECT_EQ(f7.method, Method::Cyclic);
    EXPECT_EQ(f7.delta, 0.1);

    const auto f12 = figure_spec("fig4.12");
    EXPECT_EQ(f12.problem, "shaw");
    EXPECT_EQ(f12.delta, 0.1);
    EXPECT_EQ(f12.full_scale_iters, 100000u);

    const auto f13 = figure_spec("fig4.13");
    EXPECT_EQ(f13.problem, "phillips");
    EXPECT_EQ(f13.method, Method::Rk);
    EXPECT_EQ(f13.delta, 0.0);

    const auto f18 = figure_spec("fig4.18");
    EXPECT_EQ(f18.problem, "shaw");
    EXPECT_EQ(f18.method, Method::Rk);
    EXPECT_EQ(f18.delta, 0.1);

    for (const char* bad : {"fig4.0", "fig4.19", "fig4.", "fig4.1x", "4.1", ""}) {
        EXPECT_THROW((void)figure_spec(bad), Error) << bad;
    }
}

TEST(Cli, ReproduceScalesIterationBudget) {
    const auto dir = scratch("reproduce");
    const auto r = invoke({"reproduce", "fig4.4", "--n", "40", "--out", dir.string(), "--gnuplot"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("N = 4000 (full scale 100000)"), std::string::npos) << r.out;
    for (const char* name : {"trace_r000.csv", "aggregate.csv", "bounds.csv", "plot.gp"}) {
        EXPECT_TRUE(fs::exists(dir / "fig4.4" / name)) << name;
    }
}

TEST(Cli, IdenticalCommandsWriteIdenticalBytes) {
    const auto dir = scratch("determinism");
    const std::vector<std::string> args{"bounds", "--problem", "gravity", "--n", "24", "--method", "block-rk",
                                        "--blocks", "3", "--partition", "random", "--x0", "random",
                                        "--replicates", "4", "--threads", "2", "--seed", "5", "--delta", "0.1",
                                        "--noise-mode", "signed-uniform", "--iters", "120", "--out",
                                        dir.string()};
    ASSERT_EQ(invoke(args).code, 0);
    const auto first = slurp(dir / "bounds.csv");
    ASSERT_EQ(invoke(args).code, 0);
    EXPECT_EQ(slurp(dir / "bounds.csv"), first);
}

TEST(Cli, StartVectorFromFile) {
    const auto dir = scratch("x0_file");
    {
        std::ofstream file(dir / "x0.txt");
        file << "1 2 3\n";
    }
    const auto ok = invoke({"solve", "--problem", "phillips", "--n", "3", "--iters", "1", "--x0",
                            "file:" + (dir / "x0.txt").string(), "--out", dir.string()});
    ASSERT_EQ(ok.code, 0) << ok.err;
    const auto bad = invoke({"solve", "--problem", "phillips", "--n", "4", "--iters", "1", "--x0",
                             "file:" + (dir / "x0.txt").string(), "--out", dir.string()});
    EXPECT_EQ(bad.code, 1);
}

TEST(Csv, DoublesKeepSeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    for (double v : {1.0 / 3.0, 2.5e-300, -7.125e12, 6.02214076e23}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

}  // namespace
}  // namespace kaczlab::cli
