#include "nbqi/bspline.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace nbqi;
using doctest::Approx;

namespace {

std::vector<double> dense_basis(const SplineSpace& space, double x)
{
    std::vector<double> out(static_cast<std::size_t>(space.dimension()), 0.0);
    const auto b = eval_basis(space, x);
    for (std::size_t k = 0; k < b.values.size(); ++k) {
        out[static_cast<std::size_t>(b.first) + k] = b.values[k];
    }
    return out;
}

std::vector<double> sample_points(const KnotVector& kv)
{
    std::vector<double> xs;
    for (int k = 0; k < kv.spans(); ++k) {
        const double l = kv.t(k);
        const double r = kv.t(k + 1);
        for (double f : {0.0, 0.13, 0.5, 0.91}) {
            xs.push_back(l + f * (r - l));
        }
    }
    xs.push_back(kv.right());
    return xs;
}

} // namespace

TEST_CASE("hat functions")
{
    const std::vector<double> in{1.0};
    const SplineSpace space(make_clamped_knots(0.0, 2.0, in, 1));
    const auto b = eval_basis(space, 0.5);
    REQUIRE(b.values.size() == 2);
    CHECK(b.first == 0);
    CHECK(b.values[0] == Approx(0.5));
    CHECK(b.values[1] == Approx(0.5));
}

TEST_CASE("clamped endpoints interpolate")
{
    const SplineSpace space(generate_partition(testing::random_spec(9, 3), 4));
    const auto left = dense_basis(space, space.left());
    CHECK(left[0] == 1.0);
    const auto right = dense_basis(space, space.right());
    CHECK(right.back() == Approx(1.0));
    // span index counts from the first knot of the clamped vector
    CHECK(space.find_span(space.right()) == space.knots().spans() - 1 + space.degree());
}

TEST_CASE("uniform quadratic at a knot")
{
    const SplineSpace space(generate_partition(testing::uniform_spec(6), 2));
    const auto b = eval_basis(space, space.knots().t(3));
    REQUIRE(b.values.size() == 3);
    CHECK(b.values[0] == Approx(0.5));
    CHECK(b.values[1] == Approx(0.5));
    CHECK(b.values[2] == Approx(0.0));
}

TEST_CASE("outside the interval throws")
{
    const SplineSpace space(generate_partition(testing::uniform_spec(4), 2));
    CHECK_THROWS_AS((void)eval_basis(space, -0.1), std::out_of_range);
    CHECK_THROWS_AS((void)eval_basis(space, 1.1), std::out_of_range);
    CHECK_THROWS_AS((void)eval_basis_derivative(space, 0.5, -1), std::invalid_argument);
}

TEST_CASE("basis matches naive recursion")
{
    for (const auto& c : testing::partition_battery(12)) {
        for (int m = 1; m <= 6; ++m) {
            const auto kv = generate_partition(c.spec, m);
            const SplineSpace space(kv);
            for (double x : sample_points(kv)) {
                const auto dense = dense_basis(space, x);
                for (int j = 0; j < space.dimension(); ++j) {
                    CHECK(dense[static_cast<std::size_t>(j)] ==
                          Approx(testing::cox_de_boor(kv.knots(), j, m, x)).epsilon(1e-12).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("derivatives match central differences")
{
    for (int m = 2; m <= 5; ++m) {
        const auto kv = generate_partition(testing::random_spec(7, 50 + static_cast<std::uint64_t>(m)), m);
        const SplineSpace space(kv);
        const double h = 1e-6;
        for (int k = 0; k < kv.spans(); ++k) {
            const double x = kv.t(k) + 0.37 * kv.step(k + 1);
            const auto d = eval_basis_derivative(space, x, 1);
            const auto plus = dense_basis(space, x + h);
            const auto minus = dense_basis(space, x - h);
            for (std::size_t a = 0; a < d.values.size(); ++a) {
                const auto j = static_cast<std::size_t>(d.first) + a;
                const double fd = (plus[j] - minus[j]) / (2 * h);
                CHECK(d.values[a] == Approx(fd).epsilon(1e-5).scale(1.0));
            }
        }
    }
}

TEST_CASE("basis integrals")
{
    SUBCASE("quadratic closed forms")
    {
        const std::vector<double> in{0.1, 0.3, 0.6};
        const SplineSpace space(make_clamped_knots(0.0, 1.0, in, 2));
        const auto& kv = space.knots();
        CHECK(basis_integral(space, 0) == Approx(kv.step(1) / 3));
        for (int i = 1; i + 1 < space.dimension() - 1; ++i) {
            // B_i covers spans i-1, i, i+1 in step numbering 1..n
            const double h0 = i - 1 >= 1 ? kv.step(i - 1) : 0.0;
            const double h1 = kv.step(i);
            const double h2 = i + 1 <= kv.spans() ? kv.step(i + 1) : 0.0;
            CHECK(basis_integral(space, i) == Approx((h0 + h1 + h2) / 3));
        }
    }
    SUBCASE("sum to interval length and agree with Simpson per span")
    {
        for (int m = 1; m <= 6; ++m) {
            const SplineSpace space(generate_partition(testing::random_spec(11, 90 + static_cast<std::uint64_t>(m)), m));
            double total = 0.0;
            for (int j = 0; j < space.dimension(); ++j) {
                total += basis_integral(space, j);
            }
            CHECK(total == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("spline evaluation and Marsden identity")
{
    for (int m = 1; m <= 6; ++m) {
        const auto space = make_space(generate_partition(testing::random_spec(10, 7 + static_cast<std::uint64_t>(m)), m));
        const auto& g = space->greville();
        for (int l = 0; l <= m; ++l) {
            std::vector<double> c(static_cast<std::size_t>(space->dimension()));
            for (int j = 0; j < space->dimension(); ++j) {
                c[static_cast<std::size_t>(j)] = g.moment(j, l);
            }
            const SplineFunction s(space, c);
            for (double x : sample_points(space->knots())) {
                CHECK(s(x) == Approx(std::pow(x, l)).epsilon(1e-12).scale(1.0));
                if (l >= 1) {
                    CHECK(eval_spline(s, x, 1) == Approx(l * std::pow(x, l - 1)).epsilon(1e-9).scale(1.0));
                }
            }
        }
        const SplineFunction constant(space, std::vector<double>(static_cast<std::size_t>(space->dimension()), 2.5));
        CHECK(constant(0.3) == Approx(2.5));
        CHECK(eval_spline(constant, 0.3, 1) == Approx(0.0).scale(1.0));
        CHECK(eval_spline(constant, 0.3, m + 1) == 0.0);
    }
}

TEST_CASE("coefficient count must match the space")
{
    const auto space = make_space(generate_partition(testing::uniform_spec(4), 2));
    CHECK_THROWS_AS(SplineFunction(space, std::vector<double>(3, 0.0)), std::invalid_argument);
}
