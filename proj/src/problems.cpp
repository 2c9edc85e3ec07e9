#include "dso/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace dso {

namespace {

void require_size(const coordinate& x, std::size_t n, const char* name)
{
    if (x.size() != n)
        throw std::invalid_argument(std::string(name) + ": expected "
                                    + std::to_string(n) + " variables, got "
                                    + std::to_string(x.size()));
}

} // namespace

problem_output welded_beam(const coordinate& x)
{
    require_size(x, 4, "welded_beam");
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];

    constexpr double load = 6000.0;        // P [lb]
    constexpr double length = 14.0;        // L [in]
    constexpr double young = 30.0e6;       // E [psi]
    constexpr double shear_mod = 12.0e6;   // G [psi]
    constexpr double tau_max = 13600.0;
    constexpr double sigma_max = 30000.0;
    constexpr double delta_max = 0.25;

    problem_output out;
    out.objective = 1.10471 * x1 * x1 * x2 + 0.04811 * x3 * x4 * (14.0 + x2);

    const double tau_p = load / (std::sqrt(2.0) * x1 * x2);
    const double moment = load * (length + x2 / 2.0);
    const double half_span = (x1 + x3) / 2.0;
    const double radius = std::sqrt(x2 * x2 / 4.0 + half_span * half_span);
    const double polar = 2.0 * (std::sqrt(2.0) * x1 * x2
                                * (x2 * x2 / 12.0 + half_span * half_span));
    const double tau_pp = moment * radius / polar;
    const double tau = std::sqrt(tau_p * tau_p
                                 + 2.0 * tau_p * tau_pp * x2 / (2.0 * radius)
                                 + tau_pp * tau_pp);
    const double sigma = 6.0 * load * length / (x4 * x3 * x3);
    const double delta = 4.0 * load * std::pow(length, 3)
                         / (young * std::pow(x3, 3) * x4);
    const double buckling = 4.013 * young * std::sqrt(x3 * x3 * std::pow(x4, 6) / 36.0)
                            / (length * length)
                            * (1.0 - x3 / (2.0 * length) * std::sqrt(young / (4.0 * shear_mod)));

    out.g = {
        tau - tau_max,
        sigma - sigma_max,
        x1 - x4,
        0.10471 * x1 * x1 + 0.04811 * x3 * x4 * (14.0 + x2) - 5.0,
        0.125 - x1,
        delta - delta_max,
        load - buckling,
    };
    return out;
}

problem_output pressure_vessel(const coordinate& x)
{
    require_size(x, 4, "pressure_vessel");
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double pi = 4.0 * std::atan(1.0);

    problem_output out;
    out.objective = 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 * x3
                    + 3.1661 * x1 * x1 * x4 + 19.84 * x1 * x1 * x3;
    out.g = {
        -x1 + 0.0193 * x3,
        -x2 + 0.00954 * x3,
        -pi * x3 * x3 * x4 - 4.0 / 3.0 * pi * x3 * x3 * x3 + 1296000.0,
        x4 - 240.0,
    };
    return out;
}

problem_output three_bar_truss(const coordinate& x)
{
    require_size(x, 2, "three_bar_truss");
    const double x1 = x[0], x2 = x[1];
    const double s2 = std::sqrt(2.0);

    constexpr double load = 2.0;       // P [kN/cm^2]
    constexpr double stress = 2.0;     // sigma [kN/cm^2]
    constexpr double bar_length = 100.0;

    problem_output out;
    out.objective = (2.0 * s2 * x1 + x2) * bar_length;

    const double den = s2 * x1 * x1 + 2.0 * x1 * x2;
    out.g = {
        (s2 * x1 + x2) / den * load - stress,
        x2 / den * load - stress,
        1.0 / (s2 * x2 + x1) * load - stress,
    };
    return out;
}

namespace {

problem_definition make_problem(std::string name, coordinate lo, coordinate hi,
                                std::size_t p, problem_output (*fn)(const coordinate&))
{
    problem_definition def;
    def.name = std::move(name);
    def.dimension = lo.size();
    def.lower_bounds = std::move(lo);
    def.upper_bounds = std::move(hi);
    def.inequality_count = p;
    def.objective = [fn](const coordinate& x) { return fn(x).objective; };
    def.constraints = [fn](const coordinate& x) { return fn(x).g; };
    return def;
}

std::map<std::string, benchmark_entry> make_catalog()
{
    std::map<std::string, benchmark_entry> catalog;

    {
        benchmark_entry e;
        e.problem = make_problem("welded_beam", {0.1, 0.1, 0.1, 0.1},
                                 {2.0, 10.0, 10.0, 2.0}, 7, &welded_beam);
        e.display_name = "Welded beam";
        e.default_budget = 30000;
        e.reference = {
            {"DSO (paper)", "30,000", "1.72485230859736", "1.82878489196467"},
            {"ABC", "30,000", "1.724852", "1.741913"},
            {"CSA", "100,000", "1.7248523086", "1.7248523086"},
            {"GA", "900,000", "1.748309", "1.771973"},
            {"MBA", "47,370", "1.724853", "1.724853"},
            {"PSO-DE", "66,600", "1.724852", "1.724852"},
            {"SC", "33,095", "2.3854347", "3.0025883"},
        };
        catalog.emplace(e.problem.name, std::move(e));
    }
    {
        benchmark_entry e;
        e.problem = make_problem("pressure_vessel", {0.0, 0.0, 10.0, 10.0},
                                 {99.0, 99.0, 200.0, 200.0}, 4, &pressure_vessel);
        e.display_name = "Pressure Vessel";
        e.default_budget = 30000;
        e.reference = {
            {"DSO (paper)", "30,000", "5885.3332019268", "6489.2853259488"},
            {"ABC", "30,000", "6059.714736", "6245.308144"},
            {"CSA", "250,000", "6059.71436343", "6342.49910551"},
            {"GA", "900,000", "6288.7445", "6293.8432"},
            {"MBA", "70,650", "5889.3216", "6200.64765"},
            {"PSO-DE", "42,100", "6059.714", "6059.714"},
            {"SC", "-", "-", "-"},
        };
        catalog.emplace(e.problem.name, std::move(e));
    }
    {
        benchmark_entry e;
        e.problem = make_problem("three_bar_truss", {0.0, 0.0}, {1.0, 1.0}, 3,
                                 &three_bar_truss);
        e.display_name = "Three-bar truss";
        e.default_budget = 3000;
        e.reference = {
            {"DSO (paper)", "3000", "263.895843376498", "264.067092887924"},
            {"ABC", "-", "-", "-"},
            {"CSA", "25,000", "263.8958433765", "263.8958433765"},
            {"GA", "-", "-", "-"},
            {"MBA", "13,280", "263.895852", "263.897996"},
            {"PSO-DE", "17,600", "263.895843", "263.895843"},
            {"SC", "17,610", "263.895846", "263.903356"},
        };
        catalog.emplace(e.problem.name, std::move(e));
    }
    return catalog;
}

} // namespace

const std::map<std::string, benchmark_entry>& benchmark_catalog()
{
    static const std::map<std::string, benchmark_entry> catalog = make_catalog();
    return catalog;
}

const std::vector<std::string>& benchmark_names()
{
    static const std::vector<std::string> names = {"welded_beam", "pressure_vessel",
                                                   "three_bar_truss"};
    return names;
}

} // namespace dso
