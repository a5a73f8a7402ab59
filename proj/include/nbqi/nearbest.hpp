#pragma once

/**
 * @file nearbest.hpp
 * @brief Near-best discrete quasi-interpolants by l1-minimal exact functionals.
 *
 * For every index i the weights over the Greville window {theta_{i+s}},
 * s = -p..p, are chosen to minimize sum |w(s)| subject to exactness on P_q:
 *
 *     sum_s w(s) theta_{i+s}^r = theta_i^{(r)},   0 <= r <= q.
 *
 * The problem is solved as an LP. For q = 2 the three-point solution at
 * offsets {-p, 0, p} has an explicit l1 optimality certificate (a vector v
 * with |v| <= 1 annihilating the parametrization of the feasible set)
 * whenever the sharpened knot condition of knot_condition() holds.
 */

#include "nbqi/quasi_interp.hpp"
#include "nbqi/simplex.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nbqi {

enum class Scaling {
    /// Sites theta_{i+s} and moments theta_i^{(r)} as they are.
    none,
    /// Sites mapped by x -> (x - theta_i) / (theta_hi - theta_lo); moments taken
    /// of the mapped window. The weights are invariant under this map.
    normalized,
};

/// Exactness system for one functional over offsets lo..hi.
struct ConstraintSystem {
    int center = 0;
    int q = 0;
    std::vector<int> offsets;
    /// (q+1) x offsets.size(), row-major; row r holds the r-th powers of the sites.
    std::vector<double> matrix;
    std::vector<double> rhs;
    Scaling scaling = Scaling::none;
    double shift = 0.0;
    double scale = 1.0;

    [[nodiscard]] int rows() const noexcept { return q + 1; }
    [[nodiscard]] int cols() const noexcept { return static_cast<int>(offsets.size()); }
    [[nodiscard]] double at(int r, int c) const { return matrix[static_cast<std::size_t>(r * cols() + c)]; }
    /// max_r |(V w - b)_r| / max(1, |b|_inf).
    [[nodiscard]] double residual(std::span<const double> weights) const;
};

/// Symmetric window -p..p around i. Throws std::invalid_argument when q >
/// min(m, 2p), when a site leaves J, or when V is rank deficient.
[[nodiscard]] ConstraintSystem assemble_constraints(const SplineSpace& space, int i, int p, int q,
                                                    Scaling scaling = Scaling::normalized);

/// Window lo..hi (lo <= 0 <= hi) around i, same checks.
[[nodiscard]] ConstraintSystem assemble_constraints(const SplineSpace& space, int i, int lo, int hi, int q,
                                                    Scaling scaling);

/// Numerical rank of a row-major matrix by Gaussian elimination with complete
/// pivoting; pivots below tolerance * max|entry| count as zero.
[[nodiscard]] int numerical_rank(std::span<const double> matrix, int rows, int cols, double tolerance = 1e-12);

struct L1Solution {
    std::vector<int> offsets;
    std::vector<double> weights;
    double value = 0.0;
    lp::Status status = lp::Status::infeasible;
    int iterations = 0;
};

/// min ||w||_1 subject to V w = b via the split w = u - v, u, v >= 0, and the
/// two-phase Bland simplex. Iteration cap 10 * (2 * columns).
[[nodiscard]] L1Solution solve_l1(const ConstraintSystem& system);

/// Affine parametrization of the q = 2 feasible set around the three-point
/// solution: w = base - A * free, where `free` collects the weights at the
/// offsets K = {-p+1..-1, 1..p-1}.
struct WatsonForm {
    int center = 0;
    int p = 0;
    /// Offsets of the free parameters, in column order.
    std::vector<int> free_offsets;
    /// (2p+1) x (2p-2), row-major; row k corresponds to offset k - p.
    std::vector<double> matrix;
    /// Three-point weights at -p, 0, p embedded in 2p+1 entries.
    std::vector<double> base;
    /// Cramer coefficients per free offset (same order as free_offsets).
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;
    /// Greville sites theta_{i+s}, s = -p..p.
    std::vector<double> sites;

    [[nodiscard]] int rows() const noexcept { return 2 * p + 1; }
    [[nodiscard]] int cols() const noexcept { return static_cast<int>(free_offsets.size()); }
    [[nodiscard]] double at(int row_offset, int col) const
    {
        return matrix[static_cast<std::size_t>((row_offset + p) * cols() + col)];
    }
    /// base - A * free_params.
    [[nodiscard]] std::vector<double> weights(std::span<const double> free_params) const;
};

/// Vandermonde determinant of columns (1, x, x^2): (y - x)(z - y)(z - x).
[[nodiscard]] constexpr double vandermonde3(double x, double y, double z) noexcept
{
    return (y - x) * (z - y) * (z - x);
}

/// Requires p >= 1 and i-p, i+p in J. For p = 1 the form has no free columns.
[[nodiscard]] WatsonForm build_watson_form(const SplineSpace& space, int i, int p);

/// theta_{i-1} + theta_i <= theta_{i-p} + theta_{i+p} <= theta_i + theta_{i+1},
/// both with slack 1e-12 * max(1, |theta_{i-p}|, |theta_{i+p}|).
[[nodiscard]] bool knot_condition(const SplineSpace& space, int i, int p);

struct Certificate {
    /// v(s) for s = -p..p.
    std::vector<double> v;
    double max_abs = 0.0;
    /// ||A^T v||_inf.
    double residual = 0.0;
    /// Agreement of v with sgn(base) at -p, 0, p (true where base vanishes).
    std::array<bool, 3> sign_match{};
    bool certified = false;
};

/// The explicit dual vector v(-p) = -1, v(0) = 1, v(p) = -1,
/// v(r) = -alpha_r + beta_r + gamma_r (r < 0), v(s) = alpha_s + beta_s - gamma_s (s > 0).
[[nodiscard]] Certificate watson_certificate(const WatsonForm& form);
[[nodiscard]] Certificate watson_certificate(const SplineSpace& space, int i, int p);

/// Multipliers y with V^T y = v, recovered from the rows -p, 0, p of the
/// unscaled exactness system. When |v| <= 1, b^T y is a lower bound on every
/// feasible ||w||_1.
[[nodiscard]] std::array<double, 3> dual_multipliers(const WatsonForm& form, const Certificate& certificate);

/// Per-index record of a near-best build; mirrors one line of the audit stream.
struct IndexReport {
    int index = 0;
    int lo = 0;
    int hi = 0;
    bool boundary = false;
    ConstraintSystem system;
    L1Solution solution;
    /// ||three-point weights||_1 at offsets {-p, 0, p}; q = 2 interior only.
    std::optional<double> closed_form_value;
    std::optional<bool> knot_condition;
    std::optional<Certificate> certificate;
};

struct NearBestResult {
    QuasiInterpolant qi;
    /// max_i of the LP optimum over non-boundary stencils (1 if none).
    double nu1_star = 1.0;
    /// Same over boundary stencils.
    double boundary_nu1 = 1.0;
    std::vector<IndexReport> reports;
    std::vector<std::string> warnings;
};

/// Solves one LP per index. Boundary indices use the truncated window of
/// offsets still inside J; the two extreme indices use f(theta). Throws
/// NumericalError naming the index if an LP does not reach optimality.
[[nodiscard]] NearBestResult build_nearbest_qi(const SpaceRef& space, int p, int q);

/// JSON-lines audit record for one index.
[[nodiscard]] nlohmann::json audit_record(const IndexReport& report);

} // namespace nbqi
