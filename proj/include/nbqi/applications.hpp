#pragma once

/**
 * @file applications.hpp
 * @brief Consumers of discrete quasi-interpolants: quadrature rules,
 *        differentiation matrices on the Greville sites, and convergence studies.
 */

#include "nbqi/functions.hpp"
#include "nbqi/knots.hpp"
#include "nbqi/quasi_interp.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nbqi {

/// sum_j weights[j] f(nodes[j]) approximates the integral of f over [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int exactness = 0;

    [[nodiscard]] double apply(std::span<const double> samples) const;
    [[nodiscard]] double integrate(const std::function<double(double)>& f) const;
};

/// Integral of Qf: w_j = sum_i w_i(j - i) * integral(B_i).
[[nodiscard]] QuadratureRule quadrature_from_qi(const QuasiInterpolant& qi);

/// Dense square matrix mapping samples at the Greville sites to the
/// derivative of Qf at the same sites.
struct DifferentiationMatrix {
    int size = 0;
    std::vector<double> entries;
    /// max |i - j| over non-zero entries.
    int bandwidth = 0;
    /// Rows whose contributing stencils are all non-boundary stencils.
    std::vector<bool> interior_rows;

    [[nodiscard]] double at(int i, int j) const { return entries[static_cast<std::size_t>(i * size + j)]; }
    [[nodiscard]] std::vector<double> apply(std::span<const double> samples) const;
};

/// D[i][j] = sum_k w_k(j - k) B'_k(theta_i). Requires degree >= 2.
[[nodiscard]] DifferentiationMatrix differentiation_matrix(const QuasiInterpolant& qi);

struct ConvergenceRow {
    int n = 0;
    double h_max = 0.0;
    double error = 0.0;
    /// Slope against the previous row; NaN on the first row.
    double order_running = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log(error) against log(h_max) over the finest half of the rows.
    double fitted_order = 0.0;
};

/// Least-squares slope over the finest half (at least two rows) of the ladder.
[[nodiscard]] double fit_order(std::span<const ConvergenceRow> rows);

/// Builds Qf on a space; the operator recipe of a convergence study.
using ApproximationRecipe = std::function<SplineFunction(const SpaceRef&, const TestFunction&)>;

/// Recipe for a named operator: dqi (exact derivatives), q2star, qp2star(p) or nearbest(p, q).
[[nodiscard]] ApproximationRecipe make_recipe(QiKind kind, int p = 0, int q = 2);

/// 10 evenly spaced points per knot span, including every knot.
[[nodiscard]] std::vector<double> evaluation_grid(const KnotVector& knots);

/// sup |Qf - f| on evaluation_grid.
[[nodiscard]] double sup_error(const SplineFunction& approx, const TestFunction& f);

/// Runs the recipe on partitions generated from `family` with n = each size.
[[nodiscard]] ConvergenceReport convergence_study(const ApproximationRecipe& recipe, const TestFunction& f,
                                                  std::span<const int> sizes, const PartitionSpec& family, int degree);

/// max over interior rows of |(D f)_i - f'(theta_i)|.
[[nodiscard]] double derivative_error(const DifferentiationMatrix& d, const SplineSpace& space, const TestFunction& f);

/// Convergence of the differentiation matrix built from `builder` at interior rows.
[[nodiscard]] ConvergenceReport differentiation_study(const std::function<QuasiInterpolant(const SpaceRef&)>& builder,
                                                      const TestFunction& f, std::span<const int> sizes,
                                                      const PartitionSpec& family, int degree);

} // namespace nbqi
