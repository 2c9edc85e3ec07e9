#include "dso/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dso {

namespace {

void require_dimension(const coordinate& x, const problem_definition& problem,
                       const char* where)
{
    if (x.size() != problem.dimension)
        throw std::invalid_argument(std::string(where) + ": coordinate has "
                                    + std::to_string(x.size()) + " components, problem '"
                                    + problem.name + "' expects "
                                    + std::to_string(problem.dimension));
}

} // namespace

coordinate clamp_to_bounds(const coordinate& x, const problem_definition& problem,
                           rng_engine& rng)
{
    require_dimension(x, problem, "clamp_to_bounds");

    coordinate out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lo = problem.lower_bounds[k];
        const double hi = problem.upper_bounds[k];
        if (!std::isfinite(x[k])) {
            out[k] = std::uniform_real_distribution<double>(lo, hi)(rng);
        } else {
            out[k] = std::min(hi, std::max(lo, x[k]));
        }
    }
    return out;
}

constrained_evaluation evaluate(const problem_definition& problem, const coordinate& x,
                                const penalty_policy& policy, evaluation_counter& counter)
{
    require_dimension(x, problem, "evaluate");

    constrained_evaluation ev;
    ev.objective = problem.objective(x);
    ev.constraint_values = problem.constraints(x);
    ++counter.count;

    bool ok = std::isfinite(ev.objective);
    for (double g : ev.constraint_values)
        ok = ok && std::isfinite(g) && g <= feasibility_eps;

    ev.feasible = ok;
    ev.penalized = ok ? ev.objective : policy.value;
    return ev;
}

} // namespace dso
