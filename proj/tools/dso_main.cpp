#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dso/harness.hpp"
#include "dso/problems.hpp"

namespace {

// CLI names are hyphenated; catalog keys use underscores.
std::string catalog_key(std::string name)
{
    for (char& c : name)
        if (c == '-')
            c = '_';
    return name;
}

std::string usage_names(bool with_all)
{
    std::string s = "welded-beam, pressure-vessel, three-bar-truss";
    if (with_all)
        s += ", all";
    return s;
}

std::vector<double> parse_vector(const std::string& text)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        double v = 0.0;
        const char* first = text.data() + pos;
        const char* last = text.data() + comma;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw dso::config_error("bad component '" + text.substr(pos, comma - pos)
                                    + "' in --x");
        values.push_back(v);
        if (comma == text.size())
            break;
        pos = comma + 1;
    }
    return values;
}

void print_real(const char* label, double v)
{
    std::printf("%s%.17g\n", label, v);
}

int cmd_eval(const std::string& problem_name, const std::string& x_text)
{
    const auto& catalog = dso::benchmark_catalog();
    const auto it = catalog.find(catalog_key(problem_name));
    if (it == catalog.end()) {
        std::cerr << "error: unknown problem '" << problem_name << "'; valid names: "
                  << usage_names(false) << "\n";
        return 1;
    }
    const dso::problem_definition& problem = it->second.problem;

    const std::vector<double> x = parse_vector(x_text);
    if (x.size() != problem.dimension)
        throw dso::config_error("--x has " + std::to_string(x.size())
                                + " components, " + problem.name + " expects "
                                + std::to_string(problem.dimension));

    dso::evaluation_counter counter;
    const dso::constrained_evaluation ev =
        dso::evaluate(problem, x, dso::penalty_policy{}, counter);

    std::printf("problem: %s\n", problem.name.c_str());
    print_real("objective: ", ev.objective);
    for (std::size_t i = 0; i < ev.constraint_values.size(); ++i) {
        std::printf("g[%zu]: %.17g\n", i, ev.constraint_values[i]);
    }
    std::printf("feasible: %s\n", ev.feasible ? "yes" : "no");
    print_real("penalized: ", ev.penalized);
    return 0;
}

int cmd_list_problems()
{
    for (const auto& name : dso::benchmark_names()) {
        const auto& entry = dso::benchmark_catalog().at(name);
        const auto& p = entry.problem;
        std::string cli_name = name;
        for (char& c : cli_name)
            if (c == '_')
                c = '-';
        std::printf("%s (%s)\n", cli_name.c_str(), entry.display_name.c_str());
        std::printf("  dimension: %zu\n", p.dimension);
        std::printf("  inequality constraints: %zu\n", p.inequality_count);
        std::printf("  bounds:");
        for (std::size_t k = 0; k < p.dimension; ++k)
            std::printf(" [%g, %g]", p.lower_bounds[k], p.upper_bounds[k]);
        std::printf("\n  default budget: %llu\n",
                    static_cast<unsigned long long>(entry.default_budget));
    }
    return 0;
}

struct run_options {
    std::string problem;
    int runs = 50;
    std::uint64_t budget = 0; // 0: catalog default
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string config_path;
    bool trace = false;
    bool budget_set = false;
    bool seed_set = false;
};

int cmd_run(const run_options& opt)
{
    std::vector<std::string> problems;
    if (opt.problem == "all") {
        problems = dso::benchmark_names();
    } else {
        const std::string key = catalog_key(opt.problem);
        if (!dso::benchmark_catalog().count(key)) {
            std::cerr << "error: unknown problem '" << opt.problem
                      << "'; valid names: " << usage_names(true) << "\n";
            return 1;
        }
        problems.push_back(key);
    }

    // defaults < config file < explicit flags
    dso::dso_config base;
    std::uint64_t base_seed = 1;
    if (!opt.config_path.empty()) {
        dso::apply_config_file(base, opt.config_path);
        base_seed = base.seed;
    }
    if (opt.budget_set)
        base.budget = opt.budget;
    if (opt.seed_set)
        base_seed = opt.seed;

    std::vector<dso::experiment_result> results;
    for (const auto& name : problems) {
        dso::experiment_spec spec;
        spec.problem = name;
        spec.runs = opt.runs;
        spec.config = base;
        if (spec.config.budget == 0)
            spec.config.budget = dso::benchmark_catalog().at(name).default_budget;
        spec.base_seed = base_seed;
        spec.output_path = opt.out;
        spec.trace = opt.trace ? &std::cerr : nullptr;
        dso::run_statistics stats = dso::run_experiment(spec);
        results.push_back(dso::experiment_result{std::move(spec), std::move(stats)});
    }

    const dso::report_format fmt = opt.format == "markdown"
        ? dso::report_format::markdown
        : dso::report_format::csv;
    dso::emit_report_file(results, fmt, results.front().spec.output_path);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Drone Squadron Optimization for constrained engineering design"};
    app.require_subcommand(1);

    run_options opt;
    auto* run_cmd = app.add_subcommand("run", "Run seeded independent optimization runs "
                                              "and report statistics");
    run_cmd->add_option("--problem", opt.problem,
                        "Problem: welded-beam, pressure-vessel, three-bar-truss or all")
        ->required();
    run_cmd->add_option("--runs", opt.runs, "Independent runs per problem")
        ->default_val(50)
        ->check(CLI::PositiveNumber);
    auto* budget_opt =
        run_cmd->add_option("--budget", opt.budget, "Objective evaluation budget per run "
                                                    "(default from the problem catalog)");
    auto* seed_opt = run_cmd->add_option("--seed", opt.seed,
                                         "Base seed; run i uses seed + i (default 1)");
    run_cmd->add_option("--out", opt.out, "Output path (default stdout)");
    run_cmd->add_option("--format", opt.format, "Report format")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "markdown"}));
    run_cmd->add_option("--config", opt.config_path,
                        "Config file (key = value lines, # comments)");
    run_cmd->add_flag("--trace", opt.trace,
                      "Per-iteration trace on stderr (runs execute serially)");

    std::string eval_problem, eval_x;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate one coordinate: objective, "
                                                "constraints, feasibility");
    eval_cmd->add_option("--problem", eval_problem, "Problem name")->required();
    eval_cmd->add_option("--x", eval_x, "Comma-separated coordinate, e.g. 1,1")
        ->required();

    auto* list_cmd = app.add_subcommand("list-problems", "Print the benchmark catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            opt.budget_set = budget_opt->count() > 0;
            opt.seed_set = seed_opt->count() > 0;
            return cmd_run(opt);
        }
        if (eval_cmd->parsed())
            return cmd_eval(eval_problem, eval_x);
        if (list_cmd->parsed())
            return cmd_list_problems();
    } catch (const dso::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
