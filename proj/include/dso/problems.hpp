#ifndef DSO_PROBLEMS_HPP
#define DSO_PROBLEMS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dso/model.hpp"

namespace dso {

struct problem_output {
    double objective = 0.0;
    std::vector<double> g;
};

// Welded beam design. x = (weld thickness h, weld length l, bar height t,
// bar thickness b), n=4, p=7. Constraints: shear stress, bending stress,
// h <= b, side cost, minimum weld thickness, deflection, buckling load.
problem_output welded_beam(const coordinate& x);

// Pressure vessel design, continuous variant. x = (shell thickness Ts, head
// thickness Th, radius R, length L), n=4, p=4.
problem_output pressure_vessel(const coordinate& x);

// Three-bar truss sizing. x = (A1, A2) cross-section areas, n=2, p=3.
// Degenerate denominators (e.g. x = (0,0)) yield non-finite g values, which
// the evaluator classifies as infeasible.
problem_output three_bar_truss(const coordinate& x);

// One comparison-table row, reprinted verbatim from the source tables
// ("-" marks a Not Available cell). Never recomputed.
struct reference_row {
    std::string method;
    std::string evaluations;
    std::string best;
    std::string average;
};

struct benchmark_entry {
    problem_definition problem;
    std::string display_name;
    std::uint64_t default_budget = 0;
    std::vector<reference_row> reference;
};

// Keys: welded_beam, pressure_vessel, three_bar_truss. Iteration order is
// the map's lexicographic order; use benchmark_names() for the canonical
// experiment order.
const std::map<std::string, benchmark_entry>& benchmark_catalog();

// Canonical order: welded_beam, pressure_vessel, three_bar_truss.
const std::vector<std::string>& benchmark_names();

} // namespace dso

#endif
