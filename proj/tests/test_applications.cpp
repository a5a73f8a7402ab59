#include "nbqi/applications.hpp"
#include "nbqi/nearbest.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace nbqi;
using doctest::Approx;

TEST_CASE("quadrature from Q2*")
{
    SUBCASE("exact on P2 for any partition")
    {
        for (int m = 2; m <= 5; ++m) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto space = make_space(generate_partition(testing::random_spec(13, seed), m));
                const auto rule = quadrature_from_qi(build_q2star(space));
                for (int k = 0; k <= 2; ++k) {
                    const auto f = monomial(k);
                    CHECK(rule.integrate(f.value) == Approx(1.0 / (k + 1)).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("exact on P3 for uniform partitions")
    {
        for (int m = 2; m <= 5; ++m) {
            const auto space = make_space(generate_partition(testing::uniform_spec(17), m));
            const auto rule = quadrature_from_qi(build_q2star(space));
            CHECK(rule.integrate(monomial(3).value) == Approx(0.25).epsilon(1e-12));
        }
    }
    SUBCASE("generally inexact on P3 for random partitions")
    {
        const auto space = make_space(generate_partition(testing::random_spec(9, 5), 2));
        const auto rule = quadrature_from_qi(build_q2star(space));
        const double err = std::abs(rule.integrate(monomial(3).value) - 0.25);
        MESSAGE("cubic error on a random partition: " << err);
        CHECK(err > 1e-12);
    }
    SUBCASE("weight identities")
    {
        const auto space = make_space(generate_partition(testing::random_spec(20, 3), 3));
        const auto rule = quadrature_from_qi(build_qp2star(space, 3));
        double sum = 0.0;
        double first = 0.0;
        for (std::size_t j = 0; j < rule.weights.size(); ++j) {
            sum += rule.weights[j];
            first += rule.weights[j] * rule.nodes[j];
        }
        CHECK(sum == Approx(1.0).epsilon(1e-12));
        CHECK(first == Approx(0.5).epsilon(1e-12));
        CHECK(rule.exactness == 2);
        CHECK_THROWS_AS((void)rule.apply(std::vector<double>(2, 0.0)), std::invalid_argument);
    }
    SUBCASE("integrals converge for smooth functions")
    {
        const auto f = builtin_function("runge");
        const double exact = f.integral(0.0, 1.0);
        const auto space = make_space(generate_partition(testing::uniform_spec(200), 2));
        CHECK(quadrature_from_qi(build_q2star(space)).integrate(f.value) == Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("differentiation matrix")
{
    SUBCASE("exact on P2 samples")
    {
        for (int m = 2; m <= 4; ++m) {
            const auto space = make_space(generate_partition(testing::random_spec(15, 11), m));
            const auto d = differentiation_matrix(build_q2star(space));
            const auto& g = space->greville();
            std::vector<double> e1;
            std::vector<double> e2;
            for (int j = 0; j < space->dimension(); ++j) {
                e1.push_back(g.theta(j));
                e2.push_back(g.theta(j) * g.theta(j));
            }
            const auto d1 = d.apply(e1);
            const auto d2 = d.apply(e2);
            for (int j = 0; j < space->dimension(); ++j) {
                CHECK(d1[static_cast<std::size_t>(j)] == Approx(1.0).epsilon(1e-10));
                CHECK(d2[static_cast<std::size_t>(j)] == Approx(2 * g.theta(j)).epsilon(1e-10).scale(1.0));
            }
        }
    }
    SUBCASE("banded, with the expected interior rows for m = 2")
    {
        const int n = 12;
        const auto space = make_space(generate_partition(testing::uniform_spec(n), 2));
        const auto d = differentiation_matrix(build_q2star(space));
        CHECK(d.bandwidth <= 2);
        for (int i = 0; i < d.size; ++i) {
            CHECK(d.interior_rows[static_cast<std::size_t>(i)] == (i >= 3 && i <= n - 2));
        }
    }
    SUBCASE("interior order two for sin")
    {
        const auto report = differentiation_study([](const SpaceRef& s) { return build_q2star(s); },
                                                  builtin_function("sin"), std::vector<int>{16, 32, 64, 128},
                                                  testing::uniform_spec(16), 2);
        CHECK(report.fitted_order == Approx(2.0).epsilon(0.15));
    }
    SUBCASE("degree one is rejected")
    {
        const auto space = make_space(generate_partition(testing::uniform_spec(8), 1));
        CHECK_THROWS_AS((void)differentiation_matrix(build_q2star(space)), std::invalid_argument);
    }
}

TEST_CASE("convergence studies")
{
    const std::vector<int> ladder{16, 32, 64, 128};
    SUBCASE("Q2*, m = 2, sin")
    {
        const auto r = convergence_study(make_recipe(QiKind::q2star), builtin_function("sin"), ladder,
                                         testing::uniform_spec(16), 2);
        CHECK(std::isnan(r.rows[0].order_running));
        CHECK(r.fitted_order == Approx(3.0).epsilon(0.1));
    }
    SUBCASE("DQI, m = 3, exp")
    {
        const auto r = convergence_study(make_recipe(QiKind::dqi), builtin_function("exp"), ladder,
                                         testing::uniform_spec(16), 3);
        CHECK(r.fitted_order == Approx(4.0).epsilon(0.075));
    }
    SUBCASE("near-best and Qp2* also reach order three")
    {
        for (auto kind : {QiKind::qp2star, QiKind::nearbest}) {
            const auto r = convergence_study(make_recipe(kind, 3, 2), builtin_function("sin"), ladder,
                                             testing::uniform_spec(16), 3);
            CHECK(r.fitted_order == Approx(3.0).epsilon(0.1));
        }
    }
    SUBCASE("quadratics are reproduced at every size")
    {
        const auto r = convergence_study(make_recipe(QiKind::q2star), monomial(2), ladder,
                                         testing::random_spec(16, 3), 4);
        for (const auto& row : r.rows) CHECK(row.error <= 1e-13);
    }
    SUBCASE("ladder validation")
    {
        CHECK_THROWS_AS((void)convergence_study(make_recipe(QiKind::q2star), monomial(1), std::vector<int>{},
                                                testing::uniform_spec(4), 2),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)convergence_study(make_recipe(QiKind::q2star), monomial(1), std::vector<int>{8, 4},
                                                testing::uniform_spec(4), 2),
                        std::invalid_argument);
    }
}

TEST_CASE("fit_order and evaluation grid")
{
    std::vector<ConvergenceRow> rows;
    for (int k = 0; k < 5; ++k) {
        const double h = std::pow(0.5, k);
        rows.push_back({1 << k, h, 3.0 * std::pow(h, 2.5), 0.0});
    }
    CHECK(fit_order(rows) == Approx(2.5));
    CHECK(std::isnan(fit_order(std::span<const ConvergenceRow>(rows).first(1))));

    const auto kv = generate_partition(testing::uniform_spec(4), 2);
    const auto grid = evaluation_grid(kv);
    CHECK(grid.size() == 41);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
}

TEST_CASE("built-in test functions")
{
    const auto runge = builtin_function("runge");
    const double x = 0.3;
    const double h = 1e-4;
    const auto d = runge.derivatives(x, 3);
    CHECK(d[0] == Approx(1.0 / (1.0 + 25 * x * x)));
    CHECK(d[1] == Approx((runge(x + h) - runge(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d[2] == Approx((runge(x + h) - 2 * runge(x) + runge(x - h)) / (h * h)).epsilon(1e-5));
    const auto sin = builtin_function("sin");
    CHECK(sin.derivative(x, 5) == Approx(std::cos(x)));
    CHECK(sin.integral(0.0, 1.0) == Approx(1.0 - std::cos(1.0)));
    CHECK(monomial(3).derivative(2.0, 2) == Approx(12.0));
    CHECK(monomial(3).derivative(2.0, 4) == 0.0);
    CHECK_THROWS_AS((void)builtin_function("tan"), std::invalid_argument);
}
