#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dso/problems.hpp"
#include "formula_oracle.hpp"

using namespace dso;

namespace {

bool model_feasible(const problem_definition& p, const coordinate& x)
{
    evaluation_counter c;
    return evaluate(p, x, penalty_policy{}, c).feasible;
}

const problem_definition& catalog_problem(const std::string& name)
{
    return benchmark_catalog().at(name).problem;
}

} // namespace

TEST_CASE("catalog dimensions, constraint counts and budgets")
{
    const auto& cat = benchmark_catalog();
    REQUIRE(cat.size() == 3);

    const auto& wb = cat.at("welded_beam");
    CHECK(wb.problem.dimension == 4);
    CHECK(wb.problem.inequality_count == 7);
    CHECK(wb.default_budget == 30000);

    const auto& pv = cat.at("pressure_vessel");
    CHECK(pv.problem.dimension == 4);
    CHECK(pv.problem.inequality_count == 4);
    CHECK(pv.default_budget == 30000);

    const auto& tr = cat.at("three_bar_truss");
    CHECK(tr.problem.dimension == 2);
    CHECK(tr.problem.inequality_count == 3);
    CHECK(tr.default_budget == 3000);

    for (const auto& name : benchmark_names()) {
        const auto& p = cat.at(name).problem;
        CHECK(p.inequality_count == p.constraints(p.lower_bounds).size());
        for (std::size_t k = 0; k < p.dimension; ++k)
            CHECK(p.lower_bounds[k] < p.upper_bounds[k]);
        CHECK_FALSE(cat.at(name).reference.empty());
    }
}

TEST_CASE("welded beam reproduces the published best")
{
    const coordinate x{0.205730, 3.470489, 9.036624, 0.205730};
    const auto out = welded_beam(x);
    // frozen from the reference-formula oracle
    CHECK(out.objective == doctest::Approx(1.7248556738155942).epsilon(1e-12));
    CHECK(std::abs(out.objective - 1.72485230859736) <= 1e-4);
    CHECK(model_feasible(catalog_problem("welded_beam"), x));
}

TEST_CASE("welded beam corner and sign cases")
{
    // x1 > x4 violates the geometric constraint
    const auto out = welded_beam({0.5, 3.0, 5.0, 0.3});
    CHECK(out.g[2] == doctest::Approx(0.2));
    CHECK(out.g[2] > 0.0);

    // the lower-bound corner violates stress and buckling constraints
    const auto corner = welded_beam({0.1, 0.1, 0.1, 0.1});
    CHECK(corner.g[0] > 0.0);
    CHECK(corner.g[1] > 0.0);
    CHECK_FALSE(model_feasible(catalog_problem("welded_beam"), {0.1, 0.1, 0.1, 0.1}));
}

TEST_CASE("pressure vessel reproduces the published best")
{
    const coordinate x{0.778169, 0.384649, 40.319619, 200.0};
    const auto out = pressure_vessel(x);
    CHECK(out.objective == doctest::Approx(5885.334948620165).epsilon(1e-12));
    CHECK(std::abs(out.objective - 5885.3332019268) <= 0.01);
    CHECK(model_feasible(catalog_problem("pressure_vessel"), x));
}

TEST_CASE("pressure vessel constraint cases")
{
    // g4 is linear in x4
    const auto out = pressure_vessel({1.0, 1.0, 50.0, 241.0});
    CHECK(out.g[3] == doctest::Approx(1.0));

    // exact boundary on g1
    const double x3 = 100.0;
    const double x1 = 0.0193 * x3;
    const auto b = pressure_vessel({x1, 5.0, x3, 100.0});
    CHECK(b.g[0] == 0.0);
}

TEST_CASE("three-bar truss reproduces the published best")
{
    const coordinate x{0.788675, 0.408248};
    const auto out = three_bar_truss(x);
    CHECK(out.objective == doctest::Approx(263.8957762609202).epsilon(1e-12));
    CHECK(std::abs(out.objective - 263.895843376498) <= 1e-3);
    CHECK(model_feasible(catalog_problem("three_bar_truss"), x));
}

TEST_CASE("three-bar truss closed-form point and degeneracies")
{
    const auto out = three_bar_truss({1.0, 1.0});
    CHECK(out.objective == doctest::Approx(382.842712474619).epsilon(1e-14));
    CHECK(model_feasible(catalog_problem("three_bar_truss"), {1.0, 1.0}));

    const auto deg = three_bar_truss({0.0, 0.0});
    bool any_nonfinite = false;
    for (double g : deg.g)
        any_nonfinite = any_nonfinite || !std::isfinite(g);
    CHECK(any_nonfinite);
    CHECK_FALSE(model_feasible(catalog_problem("three_bar_truss"), {0.0, 0.0}));
}

TEST_CASE("evaluators agree with the independent reference formulas")
{
    rng_engine rng(2024);
    const auto uniform_in = [&rng](const problem_definition& p) {
        coordinate x(p.dimension);
        for (std::size_t k = 0; k < p.dimension; ++k)
            x[k] = std::uniform_real_distribution<double>(p.lower_bounds[k],
                                                          p.upper_bounds[k])(rng);
        return x;
    };
    const auto close = [](double a, double b) {
        if (!std::isfinite(a) || !std::isfinite(b))
            return std::isfinite(a) == std::isfinite(b);
        return std::abs(a - b) <= 1e-10 * std::max({1.0, std::abs(a), std::abs(b)});
    };

    const auto& wb = catalog_problem("welded_beam");
    const auto& pv = catalog_problem("pressure_vessel");
    const auto& tr = catalog_problem("three_bar_truss");
    for (int i = 0; i < 1000; ++i) {
        {
            const coordinate x = uniform_in(wb);
            const auto got = welded_beam(x);
            const auto ref = oracle::welded_beam_ref(x[0], x[1], x[2], x[3]);
            CHECK(close(got.objective, ref.f));
            for (std::size_t k = 0; k < 7; ++k)
                CHECK(close(got.g[k], ref.g[k]));
        }
        {
            const coordinate x = uniform_in(pv);
            const auto got = pressure_vessel(x);
            const auto ref = oracle::pressure_vessel_ref(x[0], x[1], x[2], x[3]);
            CHECK(close(got.objective, ref.f));
            for (std::size_t k = 0; k < 4; ++k)
                CHECK(close(got.g[k], ref.g[k]));
        }
        {
            const coordinate x = uniform_in(tr);
            const auto got = three_bar_truss(x);
            const auto ref = oracle::three_bar_truss_ref(x[0], x[1]);
            CHECK(close(got.objective, ref.f));
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(close(got.g[k], ref.g[k]));
        }
    }
}

TEST_CASE("truss objective increases in each variable")
{
    rng_engine rng(7);
    std::uniform_real_distribution<double> interior(0.05, 0.95);
    const double h = 1e-7;
    for (int i = 0; i < 200; ++i) {
        const double a1 = interior(rng), a2 = interior(rng);
        const double f0 = three_bar_truss({a1, a2}).objective;
        CHECK(three_bar_truss({a1 + h, a2}).objective > f0);
        CHECK(three_bar_truss({a1, a2 + h}).objective > f0);
    }
}

TEST_CASE("evaluators reject wrong dimension")
{
    CHECK_THROWS_AS(welded_beam({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(pressure_vessel({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(three_bar_truss({1.0, 2.0, 3.0}), std::invalid_argument);
}
