#ifndef DSO_HARNESS_HPP
#define DSO_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dso/engine.hpp"

namespace dso {

// One experiment: `runs` independent engine runs on one catalog problem;
// run i uses seed base_seed + i.
struct experiment_spec {
    std::string problem; // catalog key
    int runs = 50;
    dso_config config;   // budget 0 selects the catalog default
    std::uint64_t base_seed = 1;
    std::string output_path;       // "" or "-" selects stdout
    std::ostream* trace = nullptr; // forces serial execution when set
};

// Statistics over the per-run best penalized values. Infeasible-run bests
// enter as penalty_value; feasible_runs flags how many runs found a
// feasible point at all. std is the sample standard deviation (n - 1).
struct run_statistics {
    double best = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double worst = 0.0;
    double stddev = 0.0;
    int feasible_runs = 0;
    std::vector<run_result> per_run;
};

struct experiment_result {
    experiment_spec spec;
    run_statistics stats;
};

// Pure statistics kernel, exposed for testing against closed-form values.
run_statistics summarize(std::vector<run_result> per_run);

// Executes the runs (in parallel worker threads unless spec.trace is set)
// and aggregates by run index, so output is order-deterministic. Run
// failures are rethrown as config_error naming the run index.
run_statistics run_experiment(const experiment_spec& spec);

enum class report_format { csv, markdown };

// csv: fixed header + one row per experiment, reals at 17 significant
// digits (round-trip exact). markdown: one section per experiment mirroring
// the comparison tables (our DSO row first, then the static reference
// rows), a per-run appendix, and the pressure-vessel variant footnote.
void emit_report(const std::vector<experiment_result>& results, report_format format,
                 std::ostream& out);

// Writes to path ("" or "-" selects stdout). Throws std::runtime_error
// naming the path when it cannot be opened or written.
void emit_report_file(const std::vector<experiment_result>& results,
                      report_format format, const std::string& path);

// Plain-text config overlay: one `key = value` per line, '#' comments,
// keys are dso_config field names (teams, drones_per_team, c1, c2, c3,
// max_stagnation, pacc, commander_iter, conv_thres, budget, seed).
// Unknown keys or unparseable values throw config_error.
void apply_config_file(dso_config& config, const std::string& path);

} // namespace dso

#endif
