#include "nbqi/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace nbqi {

namespace {

// Taylor coefficients of 1 / (1 + 25 x^2) about x, from the recurrence for the
// reciprocal of the quadratic p(x + h) = p0 + p1 h + p2 h^2.
std::vector<double> runge_derivatives(double x, int k)
{
    const double p0 = 1.0 + 25.0 * x * x;
    const double p1 = 50.0 * x;
    const double p2 = 25.0;
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c[0] = 1.0 / p0;
    for (int j = 1; j <= k; ++j) {
        double acc = p1 * c[static_cast<std::size_t>(j) - 1];
        if (j >= 2) {
            acc += p2 * c[static_cast<std::size_t>(j) - 2];
        }
        c[static_cast<std::size_t>(j)] = -acc / p0;
    }
    double factorial = 1.0;
    for (int j = 1; j <= k; ++j) {
        factorial *= j;
        c[static_cast<std::size_t>(j)] *= factorial;
    }
    return c;
}

} // namespace

TestFunction builtin_function(const std::string& name)
{
    if (name == "sin") {
        return {name, [](double x) { return std::sin(x); },
                [](double x, int k) {
                    std::vector<double> d(static_cast<std::size_t>(k) + 1);
                    const double s = std::sin(x);
                    const double c = std::cos(x);
                    const double cycle[4] = {s, c, -s, -c};
                    for (int j = 0; j <= k; ++j) {
                        d[static_cast<std::size_t>(j)] = cycle[j % 4];
                    }
                    return d;
                },
                [](double x) { return -std::cos(x); }};
    }
    if (name == "exp") {
        return {name, [](double x) { return std::exp(x); },
                [](double x, int k) { return std::vector<double>(static_cast<std::size_t>(k) + 1, std::exp(x)); },
                [](double x) { return std::exp(x); }};
    }
    if (name == "runge") {
        return {name, [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, runge_derivatives,
                [](double x) { return std::atan(5.0 * x) / 5.0; }};
    }
    throw std::invalid_argument("unknown test function '" + name + "' (expected sin, exp or runge)");
}

TestFunction monomial(int k)
{
    if (k < 0) {
        throw std::invalid_argument("monomial: negative degree");
    }
    return {"x^" + std::to_string(k), [k](double x) { return std::pow(x, k); },
            [k](double x, int order) {
                std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
                for (int j = 0; j <= order && j <= k; ++j) {
                    double coef = 1.0;
                    for (int r = 0; r < j; ++r) {
                        coef *= k - r;
                    }
                    d[static_cast<std::size_t>(j)] = coef * std::pow(x, k - j);
                }
                return d;
            },
            [k](double x) { return std::pow(x, k + 1) / (k + 1); }};
}

} // namespace nbqi
