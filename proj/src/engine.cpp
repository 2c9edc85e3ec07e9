#include "dso/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

namespace dso {

namespace {

const char* const seed_templates[4] = {
    "tb + C1*(r1 - r2)",
    "x + C1*U*(tb - x) + C2*U*(gb - x)",
    "x + N*(gb - x)",
    "r1 + U*(gb - r1)",
};

coordinate random_position(const problem_definition& problem, rng_engine& rng)
{
    coordinate pos(problem.dimension);
    for (std::size_t k = 0; k < problem.dimension; ++k)
        pos[k] = std::uniform_real_distribution<double>(problem.lower_bounds[k],
                                                        problem.upper_bounds[k])(rng);
    return pos;
}

// Team/global best bookkeeping for every evaluation the squadron performs.
void note_evaluation(squadron& s, std::size_t team_index, const coordinate& pos,
                     const constrained_evaluation& ev)
{
    team& t = s.teams[team_index];
    if (ev.penalized < t.best_evaluation.penalized) {
        t.best_position = pos;
        t.best_evaluation = ev;
        t.improved_this_iteration = true;
        if (ev.penalized < s.global_best_evaluation.penalized) {
            s.global_best_position = pos;
            s.global_best_evaluation = ev;
            s.global_best_found_at = s.evaluations.count;
            s.global_best_firmware = t.fw.source;
        }
    }
}

const coordinate& drone_position(const squadron& s, std::size_t global_index,
                                 std::size_t drones_per_team)
{
    return s.teams[global_index / drones_per_team]
        .drones[global_index % drones_per_team]
        .position;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

void validate_config(const dso_config& config)
{
    if (config.teams < 2)
        throw config_error("teams must be >= 2");
    if (config.drones_per_team < 3)
        throw config_error("drones_per_team must be >= 3");
    if (!(config.pacc >= 0.0 && config.pacc <= 1.0))
        throw config_error("pacc must be in [0, 1]");
    if (config.commander_iter < 1)
        throw config_error("commander_iter must be >= 1");
    const std::uint64_t population =
        static_cast<std::uint64_t>(config.teams) * config.drones_per_team;
    if (config.budget < population)
        throw config_error("budget " + std::to_string(config.budget)
                           + " is smaller than the initial population of "
                           + std::to_string(population));
}

squadron initialize(const problem_definition& problem, const dso_config& config,
                    std::uint64_t seed)
{
    validate_config(config);

    squadron s;
    s.rng.seed(seed);
    s.global_best_evaluation.penalized = std::numeric_limits<double>::infinity();

    s.teams.reserve(static_cast<std::size_t>(config.teams));
    for (int k = 0; k < config.teams; ++k) {
        team t{make_firmware(std::string(seed_templates[k % 4])), {}, {}, {}, 0, 0, false};
        t.best_evaluation.penalized = std::numeric_limits<double>::infinity();
        t.drones.reserve(static_cast<std::size_t>(config.drones_per_team));
        s.teams.push_back(std::move(t));
    }

    const penalty_policy policy;
    for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
        for (int di = 0; di < config.drones_per_team; ++di) {
            coordinate pos = random_position(problem, s.rng);
            constrained_evaluation ev = evaluate(problem, pos, policy, s.evaluations);
            note_evaluation(s, ti, pos, ev);
            s.teams[ti].drones.push_back(drone{std::move(pos), std::move(ev)});
        }
    }
    return s;
}

void step(squadron& s, const problem_definition& problem, const dso_config& config)
{
#ifndef NDEBUG
    const double best_before = s.global_best_evaluation.penalized;
#endif
    const penalty_policy policy;
    const auto dpt = static_cast<std::size_t>(config.drones_per_team);
    const std::size_t total = s.teams.size() * dpt;

    ++s.iteration;
    for (team& t : s.teams)
        t.improved_this_iteration = false;

    for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
        team& t = s.teams[ti];
        for (std::size_t di = 0; di < t.drones.size(); ++di) {
            if (s.evaluations.count >= config.budget)
                return;

            const std::size_t self = ti * dpt + di;
            std::uniform_int_distribution<std::size_t> pick(0, total - 1);
            std::size_t a;
            do {
                a = pick(s.rng);
            } while (a == self);
            std::size_t b;
            do {
                b = pick(s.rng);
            } while (b == self || b == a);

            drone& d = t.drones[di];
            eval_context ctx{d.position,
                             t.best_position,
                             s.global_best_position,
                             drone_position(s, a, dpt),
                             drone_position(s, b, dpt),
                             config.c1,
                             config.c2,
                             config.c3,
                             s.rng};
            coordinate cand = clamp_to_bounds(eval_expr(t.fw.tree, ctx), problem, s.rng);
            constrained_evaluation ev = evaluate(problem, cand, policy, s.evaluations);
            note_evaluation(s, ti, cand, ev);

            bool accept = ev.penalized < d.evaluation.penalized;
            if (!accept && ev.feasible)
                accept = std::uniform_real_distribution<double>(0.0, 1.0)(s.rng)
                         < config.pacc;
            if (accept) {
                d.position = std::move(cand);
                d.evaluation = std::move(ev);
                ++t.improvements_since_command;
            }
        }
    }

    if (s.evaluations.count >= config.budget)
        return;

    if (s.iteration % static_cast<std::uint64_t>(config.commander_iter) == 0)
        command_center_update(s, config);

    for (team& t : s.teams) {
        if (t.improved_this_iteration)
            t.stagnation_counter = 0;
        else
            ++t.stagnation_counter;
    }

    apply_countermeasures(s, problem, config);

#ifndef NDEBUG
    assert(s.global_best_evaluation.penalized <= best_before);
#endif
}

void command_center_update(squadron& s, const dso_config& config)
{
    std::vector<std::size_t> order(s.teams.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // descending by score; stable keeps lower indices first on ties, so the
    // worst slot falls to the highest tied index
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.teams[a].improvements_since_command
               > s.teams[b].improvements_since_command;
    });

    const std::size_t best = order.front();
    const std::size_t second = order[1];
    const std::size_t worst = order.back();

    const bool do_mutate =
        std::uniform_real_distribution<double>(0.0, 1.0)(s.rng) < 0.5;
    expr_tree next = do_mutate
        ? mutate_firmware(s.teams[best].fw.tree, s.rng)
        : recombine_firmware(s.teams[best].fw.tree, s.teams[second].fw.tree, s.rng);
    s.teams[worst].fw = make_firmware(std::move(next));

    for (team& t : s.teams)
        t.improvements_since_command = 0;

    (void)config;
}

void apply_countermeasures(squadron& s, const problem_definition& problem,
                           const dso_config& config)
{
    const penalty_policy policy;

    for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
        team& t = s.teams[ti];
        if (t.stagnation_counter < config.max_stagnation)
            continue;
        for (drone& d : t.drones) {
            if (s.evaluations.count >= config.budget)
                return;
            d.position = random_position(problem, s.rng);
            d.evaluation = evaluate(problem, d.position, policy, s.evaluations);
            note_evaluation(s, ti, d.position, d.evaluation);
        }
        t.stagnation_counter = 0;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t best_team = 0, best_drone = 0;
    for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
        for (std::size_t di = 0; di < s.teams[ti].drones.size(); ++di) {
            const double v = s.teams[ti].drones[di].evaluation.penalized;
            if (v < lo) {
                lo = v;
                best_team = ti;
                best_drone = di;
            }
            hi = std::max(hi, v);
        }
    }
    if (!(hi - lo < config.conv_thres) || !(hi < penalty_value))
        return;

    for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
        for (std::size_t di = 0; di < s.teams[ti].drones.size(); ++di) {
            if (ti == best_team && di == best_drone)
                continue;
            if (s.evaluations.count >= config.budget)
                return;
            drone& d = s.teams[ti].drones[di];
            d.position = random_position(problem, s.rng);
            d.evaluation = evaluate(problem, d.position, policy, s.evaluations);
            note_evaluation(s, ti, d.position, d.evaluation);
        }
    }
}

run_result run(const problem_definition& problem, const dso_config& config,
               std::ostream* trace)
{
    squadron s = initialize(problem, config, config.seed);

    char line[256];
    while (s.evaluations.count < config.budget) {
        step(s, problem, config);
        if (trace) {
            std::snprintf(line, sizeof line, "iter=%llu evals=%llu best=%.17g fw=",
                          static_cast<unsigned long long>(s.iteration),
                          static_cast<unsigned long long>(s.evaluations.count),
                          s.global_best_evaluation.penalized);
            *trace << line;
            for (std::size_t ti = 0; ti < s.teams.size(); ++ti) {
                std::snprintf(line, sizeof line, "%s%016llx", ti ? "," : "",
                              static_cast<unsigned long long>(fnv1a(s.teams[ti].fw.source)));
                *trace << line;
            }
            *trace << '\n';
        }
    }

    run_result r;
    r.best_value = s.global_best_evaluation.penalized;
    r.best_coordinate = s.global_best_position;
    r.best_feasible = s.global_best_evaluation.feasible;
    r.evaluations_used = s.evaluations.count;
    r.winning_firmware = s.global_best_firmware;
    r.iterations = s.iteration;
    r.seed = config.seed;
    return r;
}

} // namespace dso
