#pragma once

// Built-in smooth test functions with exact derivatives and integrals.

#include <functional>
#include <string>
#include <vector>

namespace nbqi {

struct TestFunction {
    std::string name;
    std::function<double(double)> value;
    /// (f, f', ..., f^{(k)}) at x.
    std::function<std::vector<double>(double x, int k)> derivatives;
    /// Antiderivative, for exact integrals.
    std::function<double(double)> primitive;

    [[nodiscard]] double operator()(double x) const { return value(x); }
    [[nodiscard]] double derivative(double x, int order) const { return derivatives(x, order).back(); }
    [[nodiscard]] double integral(double a, double b) const { return primitive(b) - primitive(a); }
};

/// sin, exp, runge (1 / (1 + 25 x^2)). Throws std::invalid_argument otherwise.
[[nodiscard]] TestFunction builtin_function(const std::string& name);

/// x^k.
[[nodiscard]] TestFunction monomial(int k);

} // namespace nbqi
