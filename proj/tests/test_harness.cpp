#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dso/harness.hpp"
#include "dso/problems.hpp"

using namespace dso;

namespace {

run_result fake_run(double best, bool feasible = true)
{
    run_result r;
    r.best_value = best;
    r.best_feasible = feasible;
    r.evaluations_used = 100;
    r.winning_firmware = "x";
    return r;
}

experiment_spec truss_spec(int runs, std::uint64_t budget, std::uint64_t base_seed)
{
    experiment_spec spec;
    spec.problem = "three_bar_truss";
    spec.runs = runs;
    spec.config.budget = budget;
    spec.base_seed = base_seed;
    return spec;
}

} // namespace

TEST_CASE("summarize matches closed-form statistics")
{
    const auto st = summarize({fake_run(1.0), fake_run(2.0), fake_run(3.0)});
    CHECK(st.best == 1.0);
    CHECK(st.mean == 2.0);
    CHECK(st.median == 2.0);
    CHECK(st.worst == 3.0);
    CHECK(st.stddev == 1.0);
    CHECK(st.feasible_runs == 3);

    const auto even = summarize({fake_run(4.0), fake_run(1.0), fake_run(2.0), fake_run(3.0)});
    CHECK(even.median == 2.5);
    CHECK(even.best == 1.0);
    CHECK(even.worst == 4.0);
}

TEST_CASE("summarize degenerate single run")
{
    const auto st = summarize({fake_run(5.5)});
    CHECK(st.best == 5.5);
    CHECK(st.mean == 5.5);
    CHECK(st.median == 5.5);
    CHECK(st.worst == 5.5);
    CHECK(st.stddev == 0.0);
}

TEST_CASE("summarize keeps penalty-value entries finite in the mean")
{
    const auto st = summarize({fake_run(1.0), fake_run(penalty_value, false)});
    CHECK(st.feasible_runs == 1);
    CHECK(st.worst == penalty_value);
    CHECK(std::isfinite(st.mean));
    CHECK(st.best <= st.median);
    CHECK(st.median <= st.worst);
}

TEST_CASE("run_experiment is seeded by run index and budget-exact")
{
    const experiment_spec spec = truss_spec(4, 500, 100);
    const run_statistics st = run_experiment(spec);
    REQUIRE(st.per_run.size() == 4);
    for (std::size_t i = 0; i < st.per_run.size(); ++i) {
        CHECK(st.per_run[i].seed == 100 + i);
        CHECK(st.per_run[i].evaluations_used == 500);
    }
    CHECK(st.best <= st.median);
    CHECK(st.median <= st.worst);
    CHECK(st.best <= st.mean);
    CHECK(st.mean <= st.worst);
}

TEST_CASE("parallel and serial execution produce identical statistics")
{
    const experiment_spec parallel = truss_spec(6, 400, 42);

    experiment_spec serial = parallel;
    std::ostringstream sink;
    serial.trace = &sink; // trace forces serial execution

    const run_statistics a = run_experiment(parallel);
    const run_statistics b = run_experiment(serial);
    CHECK(a.best == b.best);
    CHECK(a.mean == b.mean);
    CHECK(a.median == b.median);
    CHECK(a.worst == b.worst);
    CHECK(a.stddev == b.stddev);
    REQUIRE(a.per_run.size() == b.per_run.size());
    for (std::size_t i = 0; i < a.per_run.size(); ++i) {
        CHECK(a.per_run[i].best_value == b.per_run[i].best_value);
        CHECK(a.per_run[i].winning_firmware == b.per_run[i].winning_firmware);
    }
}

TEST_CASE("run_experiment validates its spec")
{
    experiment_spec bad = truss_spec(0, 500, 1);
    CHECK_THROWS_AS(run_experiment(bad), config_error);

    experiment_spec unknown = truss_spec(2, 500, 1);
    unknown.problem = "bogus";
    CHECK_THROWS_AS(run_experiment(unknown), config_error);

    experiment_spec tiny = truss_spec(2, 10, 1); // budget < population
    CHECK_THROWS_AS(run_experiment(tiny), config_error);
}

TEST_CASE("csv report has the fixed header, one row, and round-trip reals")
{
    experiment_spec spec = truss_spec(3, 500, 9);
    run_statistics st = run_experiment(spec);
    std::ostringstream out;
    emit_report({experiment_result{spec, st}}, report_format::csv, out);

    std::istringstream lines(out.str());
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header == "problem,method,runs,evaluations,best,mean,median,worst,std,"
                    "feasible_runs,base_seed");

    std::vector<std::string> fields;
    std::istringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ','))
        fields.push_back(cell);
    REQUIRE(fields.size() == 11);
    CHECK(fields[0] == "three_bar_truss");
    CHECK(fields[1] == "DSO");
    CHECK(fields[2] == "3");
    CHECK(fields[3] == "500");
    CHECK(std::stod(fields[4]) == st.best);   // 17 digits round-trip exactly
    CHECK(std::stod(fields[5]) == st.mean);
    CHECK(std::stod(fields[6]) == st.median);
    CHECK(std::stod(fields[7]) == st.worst);
    CHECK(std::stod(fields[8]) == st.stddev);
    CHECK(fields[9] == "3");
    CHECK(fields[10] == "9");

    // byte-identical on re-emission
    std::ostringstream again;
    emit_report({experiment_result{spec, st}}, report_format::csv, again);
    CHECK(out.str() == again.str());
}

TEST_CASE("markdown report mirrors the comparison table")
{
    experiment_spec spec = truss_spec(2, 400, 3);
    run_statistics st = run_experiment(spec);
    std::ostringstream out;
    emit_report({experiment_result{spec, st}}, report_format::markdown, out);
    const std::string text = out.str();

    CHECK(text.find("## Three-bar truss") != std::string::npos);
    CHECK(text.find("| Method | Evaluations | Best | Average |") != std::string::npos);
    CHECK(text.find("DSO (this build)") != std::string::npos);
    CHECK(text.find("| MBA | 13,280 | 263.895852 | 263.897996 |") != std::string::npos);
    CHECK(text.find("| DSO (paper) | 3000 | 263.895843376498 | 264.067092887924 |")
          != std::string::npos);
    CHECK(text.find("### Per-run results") != std::string::npos);
    CHECK(text.find("| 1 | 4 | ") != std::string::npos); // run 1, seed 3+1
}

TEST_CASE("pressure vessel markdown carries the variant footnote")
{
    experiment_spec spec;
    spec.problem = "pressure_vessel";
    spec.runs = 1;
    spec.config.budget = 100;
    spec.base_seed = 1;
    run_statistics st = run_experiment(spec);
    std::ostringstream out;
    emit_report({experiment_result{spec, st}}, report_format::markdown, out);
    CHECK(out.str().find("continuous-thickness") != std::string::npos);
    CHECK(out.str().find("discrete-thickness") != std::string::npos);
}

TEST_CASE("emit_report_file writes files and reports bad paths")
{
    experiment_spec spec = truss_spec(1, 200, 5);
    run_statistics st = run_experiment(spec);
    const std::string path = "test_report_tmp.csv";
    emit_report_file({experiment_result{spec, st}}, report_format::csv, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("problem,", 0) == 0);
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(
        emit_report_file({experiment_result{spec, st}}, report_format::csv,
                         "no_such_dir/report.csv"),
        doctest::Contains("no_such_dir/report.csv"), std::runtime_error);
}

TEST_CASE("config files overlay onto defaults")
{
    const std::string path = "test_config_tmp.cfg";
    {
        std::ofstream out(path);
        out << "# experiment overrides\n";
        out << "teams = 5\n";
        out << "drones_per_team=10\n";
        out << "pacc = 0.25   # inline comment\n";
        out << "\n";
        out << "budget = 1234\n";
        out << "seed = 99\n";
    }
    dso_config c;
    apply_config_file(c, path);
    std::remove(path.c_str());

    CHECK(c.teams == 5);
    CHECK(c.drones_per_team == 10);
    CHECK(c.pacc == 0.25);
    CHECK(c.budget == 1234);
    CHECK(c.seed == 99);
    CHECK(c.c1 == 0.5);            // untouched defaults
    CHECK(c.max_stagnation == 50);
    CHECK(c.commander_iter == 2);
    CHECK(c.conv_thres == 1e-8);
}

TEST_CASE("config file errors name the offending line")
{
    const std::string path = "test_config_bad.cfg";
    {
        std::ofstream out(path);
        out << "teams = 4\n";
        out << "warp_drive = on\n";
    }
    dso_config c;
    CHECK_THROWS_WITH_AS(apply_config_file(c, path), doctest::Contains("line 2"),
                         config_error);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "pacc 0.5\n";
    }
    CHECK_THROWS_AS(apply_config_file(c, path), config_error);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "teams = four\n";
    }
    CHECK_THROWS_AS(apply_config_file(c, path), config_error);
    std::remove(path.c_str());

    CHECK_THROWS_AS(apply_config_file(c, "missing_file.cfg"), config_error);
}
