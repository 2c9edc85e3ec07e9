#ifndef DSO_ENGINE_HPP
#define DSO_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dso/firmware.hpp"
#include "dso/model.hpp"

namespace dso {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct dso_config {
    int teams = 4;
    int drones_per_team = 15;
    double c1 = 0.5;
    double c2 = 0.3;
    double c3 = 0.7;
    int max_stagnation = 50;
    double pacc = 0.5;
    int commander_iter = 2;
    double conv_thres = 1e-8;
    std::uint64_t budget = 0;
    std::uint64_t seed = 1;
};

// Throws config_error unless: teams >= 2, drones_per_team >= 3,
// 0 <= pacc <= 1, commander_iter >= 1, budget >= teams * drones_per_team.
void validate_config(const dso_config& config);

struct drone {
    coordinate position;
    constrained_evaluation evaluation;
};

// All drones of a team generate candidates with the same firmware.
struct team {
    firmware fw;
    std::vector<drone> drones;
    coordinate best_position;
    constrained_evaluation best_evaluation;
    std::uint64_t improvements_since_command = 0;
    int stagnation_counter = 0;
    bool improved_this_iteration = false;
};

struct squadron {
    std::vector<team> teams;
    coordinate global_best_position;
    constrained_evaluation global_best_evaluation;
    std::uint64_t global_best_found_at = 0;
    std::string global_best_firmware; // source of the producing team, at discovery time
    evaluation_counter evaluations;
    std::uint64_t iteration = 0;
    rng_engine rng;
};

struct run_result {
    double best_value = 0.0;
    coordinate best_coordinate;
    bool best_feasible = false;
    std::uint64_t evaluations_used = 0;
    std::string winning_firmware;
    std::uint64_t iterations = 0;
    std::uint64_t seed = 0;
};

// Uniform random in-bounds population, one evaluation per drone. Team k
// starts with seed firmware template k mod 4 (difference move, two-attractor
// move, Gaussian jump toward the global best, uniform blend toward it).
squadron initialize(const problem_definition& problem, const dso_config& config,
                    std::uint64_t seed);

// One iteration: every drone proposes a candidate through its team firmware
// (r1/r2 drawn squadron-wide, distinct from each other and the drone),
// clamped and evaluated; a candidate replaces the drone if strictly better
// by penalized value, or with probability pacc when feasible. Stops
// mid-sweep the instant the budget is exhausted. Every commander_iter
// iterations the command center rewrites the worst team's firmware;
// stagnation and convergence countermeasures run at iteration end.
void step(squadron& s, const problem_definition& problem, const dso_config& config);

// Ranks teams by acceptance count since the last call (ties favor the lower
// index); the worst team's firmware becomes either a mutation of the best
// team's or a recombination of the two best (coin flip). Drone positions
// are kept; all counters reset.
void command_center_update(squadron& s, const dso_config& config);

// (a) Teams stagnant for max_stagnation iterations get their drone
// positions re-drawn uniformly (firmware kept). (b) If all current drone
// penalized values are feasible-finite and within conv_thres of each other,
// every drone but the current best is re-drawn. Re-draws consume budget and
// stop when it runs out.
void apply_countermeasures(squadron& s, const problem_definition& problem,
                           const dso_config& config);

// Full budget-exact run: initialize with config.seed, then step until
// evaluations_used == budget. If trace is non-null, one line per iteration
// is written: iteration, evaluations used, global best penalized value,
// per-team firmware hash.
run_result run(const problem_definition& problem, const dso_config& config,
               std::ostream* trace = nullptr);

} // namespace dso

#endif
