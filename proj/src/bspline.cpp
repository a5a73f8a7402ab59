#include "nbqi/bspline.hpp"

#include "nbqi/io.hpp"

#include <algorithm>
#include <stdexcept>

namespace nbqi {

namespace {

void require_inside(const SplineSpace& space, double x)
{
    if (!space.contains(x)) {
        throw std::out_of_range("spline: x = " + io::format_double(x) + " outside [" +
                                io::format_double(space.left()) + ", " + io::format_double(space.right()) + "]");
    }
}

// Cox-de Boor triangle for the p+1 degree-p functions active on span s.
std::vector<double> basis_of_degree(std::span<const double> u, int s, double x, int p)
{
    std::vector<double> values(static_cast<std::size_t>(p) + 1, 0.0);
    std::vector<double> left(static_cast<std::size_t>(p) + 1, 0.0);
    std::vector<double> right(static_cast<std::size_t>(p) + 1, 0.0);
    values[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - u[s + 1 - j];
        right[j] = u[s + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = values[r] / (right[r + 1] + left[j - r]);
            values[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        values[j] = saved;
    }
    return values;
}

double safe_ratio(double num, double den)
{
    return den == 0.0 ? 0.0 : num / den;
}

} // namespace

SplineSpace::SplineSpace(KnotVector knots) : knots_(std::move(knots)), greville_(greville_grid(knots_)) {}

int SplineSpace::find_span(double x) const
{
    const auto u = knots_.knots();
    const int m = degree();
    const int last = dimension() - 1;
    if (x >= right()) {
        return last;
    }
    const auto it = std::upper_bound(u.begin() + m, u.begin() + last + 1, x);
    return static_cast<int>(it - u.begin()) - 1;
}

BasisValues eval_basis(const SplineSpace& space, double x)
{
    require_inside(space, x);
    const int s = space.find_span(x);
    return {s - space.degree(), basis_of_degree(space.knots().knots(), s, x, space.degree())};
}

BasisValues eval_basis_derivative(const SplineSpace& space, double x, int order)
{
    require_inside(space, x);
    if (order < 0) {
        throw std::invalid_argument("spline: negative derivative order");
    }
    const int m = space.degree();
    const int s = space.find_span(x);
    BasisValues out{s - m, std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0)};
    if (order > m) {
        return out;
    }
    const auto u = space.knots().knots();
    // Start from degree m-order and raise the degree with
    // d/dx-rule B'_{j,p} = p (B_{j,p-1}/(u_{j+p}-u_j) - B_{j+1,p-1}/(u_{j+p+1}-u_{j+1})).
    // cur[k] holds the value for basis index s-p+k.
    std::vector<double> cur = basis_of_degree(u, s, x, m - order);
    for (int p = m - order + 1; p <= m; ++p) {
        std::vector<double> next(static_cast<std::size_t>(p) + 1, 0.0);
        const auto lower = [&](int j) -> double {
            const int k = j - (s - (p - 1));
            return (k >= 0 && k < p) ? cur[static_cast<std::size_t>(k)] : 0.0;
        };
        for (int k = 0; k <= p; ++k) {
            const int j = s - p + k;
            next[static_cast<std::size_t>(k)] =
                p * (safe_ratio(lower(j), u[j + p] - u[j]) - safe_ratio(lower(j + 1), u[j + p + 1] - u[j + 1]));
        }
        cur = std::move(next);
    }
    out.values = std::move(cur);
    return out;
}

double basis_integral(const SplineSpace& space, int j)
{
    if (j < 0 || j >= space.dimension()) {
        throw std::out_of_range("spline: basis index " + std::to_string(j) + " outside J");
    }
    const auto u = space.knots().knots();
    const int m = space.degree();
    return (u[j + m + 1] - u[j]) / (m + 1);
}

SplineFunction::SplineFunction(SpaceRef space, std::vector<double> coefficients)
    : space_(std::move(space)), coefficients_(std::move(coefficients))
{
    if (!space_) {
        throw std::invalid_argument("spline: null space");
    }
    if (coefficients_.size() != static_cast<std::size_t>(space_->dimension())) {
        throw std::invalid_argument("spline: expected " + std::to_string(space_->dimension()) + " coefficients, got " +
                                    std::to_string(coefficients_.size()));
    }
}

double SplineFunction::operator()(double x) const
{
    return eval_spline(*this, x, 0);
}

double eval_spline(const SplineFunction& f, double x, int derivative_order)
{
    const auto& space = f.space();
    require_inside(space, x);
    if (derivative_order < 0) {
        throw std::invalid_argument("spline: negative derivative order");
    }
    const int m = space.degree();
    if (derivative_order > m) {
        return 0.0;
    }
    const auto u = space.knots().knots();
    const int s = space.find_span(x);

    // d[k] is the coefficient of index s-m+k.
    std::vector<double> d(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        d[static_cast<std::size_t>(k)] = f.coefficient(s - m + k);
    }
    // Differencing: c^{(r)}_j = (m-r+1) (c^{(r-1)}_j - c^{(r-1)}_{j-1}) / (u_{j+m-r+1} - u_j).
    for (int r = 1; r <= derivative_order; ++r) {
        for (int k = m; k >= r; --k) {
            const int j = s - m + k;
            d[static_cast<std::size_t>(k)] =
                (m - r + 1) * safe_ratio(d[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(k) - 1],
                                         u[j + m - r + 1] - u[j]);
        }
    }
    // de Boor on the remaining degree p; coefficients are d[m-p..m].
    const int p = m - derivative_order;
    std::vector<double> c(d.begin() + (m - p), d.end());
    for (int r = 1; r <= p; ++r) {
        for (int k = p; k >= r; --k) {
            const int j = s - p + k;
            const double alpha = safe_ratio(x - u[j], u[j + p - r + 1] - u[j]);
            c[static_cast<std::size_t>(k)] =
                (1.0 - alpha) * c[static_cast<std::size_t>(k) - 1] + alpha * c[static_cast<std::size_t>(k)];
        }
    }
    return c[static_cast<std::size_t>(p)];
}

} // namespace nbqi
