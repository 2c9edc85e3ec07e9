#include "dso/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <thread>

#include "dso/problems.hpp"

namespace dso {

namespace {

std::string real17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const benchmark_entry& lookup(const std::string& name)
{
    const auto& catalog = benchmark_catalog();
    auto it = catalog.find(name);
    if (it == catalog.end()) {
        std::string msg = "unknown problem '" + name + "'; valid names:";
        for (const auto& n : benchmark_names())
            msg += " " + n;
        throw config_error(msg);
    }
    return it->second;
}

} // namespace

run_statistics summarize(std::vector<run_result> per_run)
{
    run_statistics st;
    const std::size_t n = per_run.size();

    std::vector<double> bests(n);
    for (std::size_t i = 0; i < n; ++i) {
        bests[i] = per_run[i].best_value;
        if (per_run[i].best_feasible)
            ++st.feasible_runs;
    }

    std::vector<double> sorted = bests;
    std::sort(sorted.begin(), sorted.end());
    st.best = sorted.front();
    st.worst = sorted.back();
    st.median = n % 2 == 1 ? sorted[n / 2]
                           : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;

    // summed as x/n so penalty_value entries cannot overflow to infinity
    double mean = 0.0;
    for (double v : bests)
        mean += v / static_cast<double>(n);
    st.mean = mean;

    double var = 0.0;
    if (n > 1) {
        for (double v : bests) {
            const double d = v - mean;
            var += d * d / static_cast<double>(n - 1);
        }
    }
    st.stddev = std::sqrt(var);
    st.per_run = std::move(per_run);
    return st;
}

run_statistics run_experiment(const experiment_spec& spec)
{
    if (spec.runs < 1)
        throw config_error("runs must be >= 1");
    const benchmark_entry& entry = lookup(spec.problem);

    dso_config base = spec.config;
    if (base.budget == 0)
        base.budget = entry.default_budget;
    validate_config(base);

    const int runs = spec.runs;
    std::vector<run_result> results(static_cast<std::size_t>(runs));
    std::vector<std::string> errors(static_cast<std::size_t>(runs));

    auto run_one = [&](int i, std::ostream* trace) {
        try {
            dso_config c = base;
            c.seed = spec.base_seed + static_cast<std::uint64_t>(i);
            results[static_cast<std::size_t>(i)] = run(entry.problem, c, trace);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    };

    if (spec.trace) {
        for (int i = 0; i < runs; ++i) {
            *spec.trace << "# run=" << i << " seed=" << spec.base_seed + static_cast<std::uint64_t>(i)
                        << " problem=" << spec.problem << '\n';
            run_one(i, spec.trace);
        }
    } else {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const int workers = std::min<int>(runs, static_cast<int>(hw));
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= runs)
                    return;
                run_one(i, nullptr);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (int i = 0; i < runs; ++i)
        if (!errors[static_cast<std::size_t>(i)].empty())
            throw config_error("run " + std::to_string(i) + " failed: "
                               + errors[static_cast<std::size_t>(i)]);

    return summarize(std::move(results));
}

namespace {

void emit_csv(const std::vector<experiment_result>& results, std::ostream& out)
{
    out << "problem,method,runs,evaluations,best,mean,median,worst,std,"
           "feasible_runs,base_seed\n";
    for (const auto& r : results) {
        const std::uint64_t budget = r.spec.config.budget;
        out << r.spec.problem << ",DSO," << r.spec.runs << ',' << budget << ','
            << real17(r.stats.best) << ',' << real17(r.stats.mean) << ','
            << real17(r.stats.median) << ',' << real17(r.stats.worst) << ','
            << real17(r.stats.stddev) << ',' << r.stats.feasible_runs << ','
            << r.spec.base_seed << '\n';
    }
}

void emit_markdown(const std::vector<experiment_result>& results, std::ostream& out)
{
    for (const auto& r : results) {
        const benchmark_entry& entry = lookup(r.spec.problem);
        out << "## " << entry.display_name << "\n\n";
        out << "| Method | Evaluations | Best | Average |\n";
        out << "| --- | --- | --- | --- |\n";
        out << "| DSO (this build) | " << r.spec.config.budget << " | "
            << real17(r.stats.best) << " | " << real17(r.stats.mean) << " |\n";
        for (const auto& row : entry.reference)
            out << "| " << row.method << " | " << row.evaluations << " | " << row.best
                << " | " << row.average << " |\n";
        out << '\n';
        out << "Runs: " << r.spec.runs << ", base seed " << r.spec.base_seed
            << ", feasible runs " << r.stats.feasible_runs << '/' << r.spec.runs
            << ". Median " << real17(r.stats.median) << ", worst "
            << real17(r.stats.worst) << ", std " << real17(r.stats.stddev) << ".\n";
        if (r.stats.feasible_runs < r.spec.runs)
            out << "**Warning:** " << r.spec.runs - r.stats.feasible_runs
                << " run(s) found no feasible point; their bests enter the "
                   "statistics as the penalty value 1.79769313486232e+308.\n";
        if (r.spec.problem == "pressure_vessel")
            out << "Note: this is the continuous-thickness pressure vessel variant; "
                   "reference rows with best around 6059.71 solve the "
                   "discrete-thickness variant and are not directly comparable.\n";
        out << "\n### Per-run results\n\n";
        out << "| Run | Seed | Best | Feasible | Winning firmware |\n";
        out << "| --- | --- | --- | --- | --- |\n";
        for (std::size_t i = 0; i < r.stats.per_run.size(); ++i) {
            const run_result& rr = r.stats.per_run[i];
            out << "| " << i << " | " << rr.seed << " | " << real17(rr.best_value)
                << " | " << (rr.best_feasible ? "yes" : "no") << " | `"
                << rr.winning_firmware << "` |\n";
        }
        out << '\n';
    }
}

} // namespace

void emit_report(const std::vector<experiment_result>& results, report_format format,
                 std::ostream& out)
{
    if (format == report_format::csv)
        emit_csv(results, out);
    else
        emit_markdown(results, out);
}

void emit_report_file(const std::vector<experiment_result>& results,
                      report_format format, const std::string& path)
{
    if (path.empty() || path == "-") {
        emit_report(results, format, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file '" + path + "'");
    emit_report(results, format, out);
    out.flush();
    if (!out)
        throw std::runtime_error("error writing output file '" + path + "'");
}

namespace {

std::string trim(std::string s)
{
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

template <typename T>
T parse_value(const std::string& text, const std::string& key, int line_no)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw config_error("config line " + std::to_string(line_no) + ": bad value '"
                           + text + "' for " + key);
    return value;
}

} // namespace

void apply_config_file(dso_config& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no)
                               + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "teams")
            config.teams = parse_value<int>(value, key, line_no);
        else if (key == "drones_per_team")
            config.drones_per_team = parse_value<int>(value, key, line_no);
        else if (key == "c1")
            config.c1 = parse_value<double>(value, key, line_no);
        else if (key == "c2")
            config.c2 = parse_value<double>(value, key, line_no);
        else if (key == "c3")
            config.c3 = parse_value<double>(value, key, line_no);
        else if (key == "max_stagnation")
            config.max_stagnation = parse_value<int>(value, key, line_no);
        else if (key == "pacc")
            config.pacc = parse_value<double>(value, key, line_no);
        else if (key == "commander_iter")
            config.commander_iter = parse_value<int>(value, key, line_no);
        else if (key == "conv_thres")
            config.conv_thres = parse_value<double>(value, key, line_no);
        else if (key == "budget")
            config.budget = parse_value<std::uint64_t>(value, key, line_no);
        else if (key == "seed")
            config.seed = parse_value<std::uint64_t>(value, key, line_no);
        else
            throw config_error("config line " + std::to_string(line_no)
                               + ": unknown key '" + key + "'");
    }
}

} // namespace dso
