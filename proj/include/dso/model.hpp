#ifndef DSO_MODEL_HPP
#define DSO_MODEL_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace dso {

// A point in the search-space. Length equals the problem dimension.
using coordinate = std::vector<double>;

using rng_engine = std::mt19937_64;

// Value assigned to every infeasible solution (Matlab realmax). Printed with
// 15 significant digits this is exactly "1.79769313486232e+308".
inline constexpr double penalty_value = std::numeric_limits<double>::max();

// A constraint g_i counts as satisfied when g_i <= feasibility_eps. The
// benchmark optima sit on active constraints, so a published coordinate
// rounded to 6 decimals can land ~5e-7 on the wrong side of g = 0; exact
// comparison would misclassify those reference points.
inline constexpr double feasibility_eps = 1e-6;

enum class penalty_kind { death_penalty };

struct penalty_policy {
    penalty_kind kind = penalty_kind::death_penalty;
    double value = penalty_value;
};

// Constrained minimization problem: minimize objective(x) subject to
// constraints(x) <= 0 componentwise, within [lower_bounds, upper_bounds].
struct problem_definition {
    std::string name;
    std::size_t dimension = 0;
    coordinate lower_bounds;
    coordinate upper_bounds;
    std::size_t inequality_count = 0;
    std::function<double(const coordinate&)> objective;
    std::function<std::vector<double>(const coordinate&)> constraints;
};

struct constrained_evaluation {
    double objective = 0.0;
    std::vector<double> constraint_values;
    bool feasible = false;
    double penalized = penalty_value;
};

inline bool operator==(const constrained_evaluation& a, const constrained_evaluation& b)
{
    return a.objective == b.objective && a.constraint_values == b.constraint_values
        && a.feasible == b.feasible && a.penalized == b.penalized;
}

// Every objective call in the system goes through evaluate(), which bumps
// one of these. Owned by a single run, never shared.
struct evaluation_counter {
    std::uint64_t count = 0;
};

// Componentwise clamp of x into the problem box. Non-finite components are
// repaired with a fresh uniform draw from [L_k, U_k] taken from rng.
// Throws std::invalid_argument on dimension mismatch.
coordinate clamp_to_bounds(const coordinate& x, const problem_definition& problem,
                           rng_engine& rng);

// Full constrained evaluation of x under the death penalty: feasible points
// keep their objective, everything else (including non-finite objective or
// constraint output) gets penalty_value assigned. Counts exactly one
// evaluation against `counter`.
constrained_evaluation evaluate(const problem_definition& problem, const coordinate& x,
                                const penalty_policy& policy, evaluation_counter& counter);

} // namespace dso

#endif
