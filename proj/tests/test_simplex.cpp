#include "nbqi/simplex.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace nbqi;
using doctest::Approx;

namespace {

lp::Problem make(int rows, int cols, std::vector<double> a, std::vector<double> b, std::vector<double> c)
{
    lp::Problem pb;
    pb.rows = rows;
    pb.cols = cols;
    pb.matrix = std::move(a);
    pb.rhs = std::move(b);
    pb.cost = std::move(c);
    return pb;
}

} // namespace

TEST_CASE("textbook equality-form problem")
{
    // min -x1 - 2x2 with x1 + x2 + s1 = 4, x1 + 3x2 + s2 = 6
    const auto pb = make(2, 4, {1, 1, 1, 0, 1, 3, 0, 1}, {4, 6}, {-1, -2, 0, 0});
    const auto res = lp::solve(pb);
    REQUIRE(res.status == lp::Status::optimal);
    CHECK(res.objective == Approx(-5.0));
    CHECK(res.x[0] == Approx(3.0));
    CHECK(res.x[1] == Approx(1.0));
}

TEST_CASE("negative right-hand sides are flipped")
{
    // x1 - x2 = -2, minimise x1 + x2 -> x = (0, 2)
    const auto pb = make(1, 2, {1, -1}, {-2}, {1, 1});
    const auto res = lp::solve(pb);
    REQUIRE(res.status == lp::Status::optimal);
    CHECK(res.objective == Approx(2.0));
    CHECK(res.x[1] == Approx(2.0));
}

TEST_CASE("infeasible and unbounded")
{
    SUBCASE("infeasible")
    {
        const auto pb = make(2, 2, {1, 1, 1, 1}, {1, 2}, {1, 1});
        CHECK(lp::solve(pb).status == lp::Status::infeasible);
    }
    SUBCASE("unbounded")
    {
        const auto pb = make(1, 2, {1, -1}, {1}, {0, -1});
        CHECK(lp::solve(pb).status == lp::Status::unbounded);
    }
    SUBCASE("iteration limit")
    {
        const auto pb = make(2, 4, {1, 1, 1, 0, 1, 3, 0, 1}, {4, 6}, {-1, -2, 0, 0});
        lp::Options opt;
        opt.max_iterations = 1;
        CHECK(lp::solve(pb, opt).status == lp::Status::iteration_limit);
    }
}

TEST_CASE("redundant rows are tolerated")
{
    const auto pb = make(2, 3, {1, 1, 1, 2, 2, 2}, {1, 2}, {3, 1, 2});
    const auto res = lp::solve(pb);
    REQUIRE(res.status == lp::Status::optimal);
    CHECK(res.objective == Approx(1.0));
}

TEST_CASE("degenerate problem terminates under Bland's rule")
{
    // Beale's cycling example in equality form with slacks.
    const auto pb = make(3, 7,
                         {0.25, -60, -0.04, 9, 1, 0, 0,
                          0.5, -90, -0.02, 3, 0, 1, 0,
                          0, 0, 1, 0, 0, 0, 1},
                         {0, 0, 1}, {-0.75, 150, -0.02, 6, 0, 0, 0});
    const auto res = lp::solve(pb);
    REQUIRE(res.status == lp::Status::optimal);
    CHECK(res.objective == Approx(-0.05));
}

TEST_CASE("dimension checks")
{
    const auto pb = make(2, 2, {1, 1}, {1, 2}, {1, 1});
    CHECK_THROWS_AS((void)lp::solve(pb), std::invalid_argument);
    CHECK(lp::to_string(lp::Status::optimal) == "optimal");
}

TEST_CASE("random feasible problems: optimum is feasible and no worse than a known point")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const int rows = 2 + t % 3;
        const int cols = rows + 2 + t % 4;
        std::vector<double> a(static_cast<std::size_t>(rows * cols));
        for (auto& v : a) v = u(rng);
        std::vector<double> x0(static_cast<std::size_t>(cols));
        for (auto& v : x0) v = 0.5 + 0.5 * u(rng);
        std::vector<double> b(static_cast<std::size_t>(rows), 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                b[static_cast<std::size_t>(r)] += a[static_cast<std::size_t>(r * cols + c)] * x0[static_cast<std::size_t>(c)];
        std::vector<double> cost(static_cast<std::size_t>(cols));
        for (auto& v : cost) v = 1.0 + u(rng);
        const auto pb = make(rows, cols, a, b, cost);
        const auto res = lp::solve(pb);
        REQUIRE(res.status == lp::Status::optimal);
        double known = 0.0;
        for (int c = 0; c < cols; ++c) known += cost[static_cast<std::size_t>(c)] * x0[static_cast<std::size_t>(c)];
        CHECK(res.objective <= known + 1e-9);
        for (int r = 0; r < rows; ++r) {
            double lhs = 0.0;
            for (int c = 0; c < cols; ++c) lhs += pb.at(r, c) * res.x[static_cast<std::size_t>(c)];
            CHECK(lhs == Approx(b[static_cast<std::size_t>(r)]).epsilon(1e-9).scale(1.0));
        }
        for (double v : res.x) CHECK(v >= -1e-12);
    }
}
