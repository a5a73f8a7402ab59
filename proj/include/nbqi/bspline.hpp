#pragma once

/**
 * @file bspline.hpp
 * @brief B-spline basis of S_m([a,b], T): evaluation, derivatives, integrals.
 *
 * Basis indices are j in J = {0, ..., n+m-1}; B_j lives on [t_{j-m}, t_{j+1}].
 * Evaluation is total on [a, b]: the last span is closed on the right.
 */

#include "nbqi/knots.hpp"

#include <memory>
#include <span>
#include <vector>

namespace nbqi {

class SplineSpace {
public:
    explicit SplineSpace(KnotVector knots);

    [[nodiscard]] const KnotVector& knots() const noexcept { return knots_; }
    [[nodiscard]] const GrevilleGrid& greville() const noexcept { return greville_; }
    [[nodiscard]] int degree() const noexcept { return knots_.degree(); }
    [[nodiscard]] int dimension() const noexcept { return knots_.dimension(); }
    [[nodiscard]] double left() const noexcept { return knots_.left(); }
    [[nodiscard]] double right() const noexcept { return knots_.right(); }
    [[nodiscard]] bool contains(double x) const noexcept { return x >= left() && x <= right(); }

    /// Index s into knots() with knots()[s] <= x < knots()[s+1]; x = b maps to
    /// the last non-empty span. The active basis functions are s-m..s.
    [[nodiscard]] int find_span(double x) const;

private:
    KnotVector knots_;
    GrevilleGrid greville_;
};

using SpaceRef = std::shared_ptr<const SplineSpace>;

[[nodiscard]] inline SpaceRef make_space(KnotVector knots)
{
    return std::make_shared<const SplineSpace>(std::move(knots));
}

/// Non-zero basis values at a point: B_{first}, ..., B_{first+m}.
struct BasisValues {
    int first = 0;
    std::vector<double> values;
};

/// Throws std::out_of_range for x outside [a, b].
[[nodiscard]] BasisValues eval_basis(const SplineSpace& space, double x);

/// order-th derivatives of the m+1 active basis functions at x. Orders above m
/// give zeros.
[[nodiscard]] BasisValues eval_basis_derivative(const SplineSpace& space, double x, int order);

/// Exact integral of B_j over [a, b]: (t_{j+1} - t_{j-m}) / (m+1).
[[nodiscard]] double basis_integral(const SplineSpace& space, int j);

class SplineFunction {
public:
    SplineFunction(SpaceRef space, std::vector<double> coefficients);

    [[nodiscard]] const SplineSpace& space() const noexcept { return *space_; }
    [[nodiscard]] const SpaceRef& space_ref() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] double coefficient(int j) const { return coefficients_.at(static_cast<std::size_t>(j)); }

    [[nodiscard]] double operator()(double x) const;

private:
    SpaceRef space_;
    std::vector<double> coefficients_;
};

/// Value of the order-th derivative of f at x, by repeated coefficient
/// differencing followed by de Boor's algorithm on the lowered degree.
/// Orders above the degree return 0. Throws std::out_of_range outside [a, b].
[[nodiscard]] double eval_spline(const SplineFunction& f, double x, int derivative_order = 0);

} // namespace nbqi
