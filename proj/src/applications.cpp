#include "nbqi/applications.hpp"

#include "nbqi/nearbest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbqi {

double QuadratureRule::apply(std::span<const double> samples) const
{
    if (samples.size() != weights.size()) {
        throw std::invalid_argument("quadrature: sample count mismatch");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        sum += weights[j] * samples[j];
    }
    return sum;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const
{
    std::vector<double> samples(nodes.size());
    std::transform(nodes.begin(), nodes.end(), samples.begin(), f);
    return apply(samples);
}

QuadratureRule quadrature_from_qi(const QuasiInterpolant& qi)
{
    const auto& space = qi.space();
    const int dim = space.dimension();
    QuadratureRule rule;
    rule.nodes = space.greville().abscissae;
    rule.weights.assign(static_cast<std::size_t>(dim), 0.0);
    rule.exactness = qi.exactness();
    for (const auto& st : qi.stencils()) {
        const double mass = basis_integral(space, st.center);
        for (std::size_t k = 0; k < st.offsets.size(); ++k) {
            rule.weights[static_cast<std::size_t>(st.center + st.offsets[k])] += st.weights[k] * mass;
        }
    }
    return rule;
}

std::vector<double> DifferentiationMatrix::apply(std::span<const double> samples) const
{
    if (samples.size() != static_cast<std::size_t>(size)) {
        throw std::invalid_argument("differentiation matrix: sample count mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(size), 0.0);
    for (int i = 0; i < size; ++i) {
        double sum = 0.0;
        for (int j = 0; j < size; ++j) {
            sum += at(i, j) * samples[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = sum;
    }
    return out;
}

DifferentiationMatrix differentiation_matrix(const QuasiInterpolant& qi)
{
    const auto& space = qi.space();
    if (space.degree() < 2) {
        throw std::invalid_argument("differentiation matrix: needs degree >= 2");
    }
    const int dim = space.dimension();
    DifferentiationMatrix d;
    d.size = dim;
    d.entries.assign(static_cast<std::size_t>(dim * dim), 0.0);
    d.interior_rows.assign(static_cast<std::size_t>(dim), true);
    for (int i = 0; i < dim; ++i) {
        const auto db = eval_basis_derivative(space, space.greville().theta(i), 1);
        for (std::size_t a = 0; a < db.values.size(); ++a) {
            const int k = db.first + static_cast<int>(a);
            const auto& st = qi.stencil(k);
            if (st.boundary) {
                d.interior_rows[static_cast<std::size_t>(i)] = false;
            }
            for (std::size_t s = 0; s < st.offsets.size(); ++s) {
                const int j = k + st.offsets[s];
                d.entries[static_cast<std::size_t>(i * dim + j)] += st.weights[s] * db.values[a];
            }
        }
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (d.at(i, j) != 0.0) {
                d.bandwidth = std::max(d.bandwidth, std::abs(i - j));
            }
        }
    }
    return d;
}

double fit_order(std::span<const ConvergenceRow> rows)
{
    if (rows.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const std::size_t count = std::max<std::size_t>(2, (rows.size() + 1) / 2);
    const auto tail = rows.subspan(rows.size() - count);
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& r : tail) {
        sx += std::log(r.h_max);
        sy += std::log(r.error);
    }
    const double mx = sx / static_cast<double>(count);
    const double my = sy / static_cast<double>(count);
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& r : tail) {
        const double dx = std::log(r.h_max) - mx;
        sxy += dx * (std::log(r.error) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ApproximationRecipe make_recipe(QiKind kind, int p, int q)
{
    switch (kind) {
    case QiKind::dqi:
        return [](const SpaceRef& space, const TestFunction& f) { return apply_dqi(space, f.derivatives); };
    case QiKind::q2star:
        return [](const SpaceRef& space, const TestFunction& f) {
            return apply_qi(build_q2star(space), sample_at_greville(*space, f.value));
        };
    case QiKind::qp2star:
        return [p](const SpaceRef& space, const TestFunction& f) {
            return apply_qi(build_qp2star(space, p), sample_at_greville(*space, f.value));
        };
    case QiKind::nearbest:
        return [p, q](const SpaceRef& space, const TestFunction& f) {
            return apply_qi(build_nearbest_qi(space, p, q).qi, sample_at_greville(*space, f.value));
        };
    }
    throw std::invalid_argument("make_recipe: unknown kind");
}

std::vector<double> evaluation_grid(const KnotVector& knots)
{
    std::vector<double> grid;
    const int n = knots.spans();
    grid.reserve(static_cast<std::size_t>(10 * n + 1));
    for (int k = 1; k <= n; ++k) {
        const double left = knots.t(k - 1);
        const double h = knots.t(k) - left;
        for (int j = 0; j < 10; ++j) {
            grid.push_back(left + h * j / 10.0);
        }
    }
    grid.push_back(knots.right());
    return grid;
}

double sup_error(const SplineFunction& approx, const TestFunction& f)
{
    double err = 0.0;
    for (double x : evaluation_grid(approx.space().knots())) {
        err = std::max(err, std::abs(approx(x) - f(x)));
    }
    return err;
}

namespace {

void finish_report(ConvergenceReport& report)
{
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        auto& row = report.rows[k];
        if (k == 0) {
            row.order_running = std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto& prev = report.rows[k - 1];
            row.order_running = std::log(prev.error / row.error) / std::log(prev.h_max / row.h_max);
        }
    }
    report.fitted_order = fit_order(report.rows);
}

void check_sizes(std::span<const int> sizes)
{
    if (sizes.empty()) {
        throw std::invalid_argument("convergence: empty size ladder");
    }
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        if (sizes[k] <= sizes[k - 1]) {
            throw std::invalid_argument("convergence: sizes must be increasing");
        }
    }
}

} // namespace

ConvergenceReport convergence_study(const ApproximationRecipe& recipe, const TestFunction& f,
                                    std::span<const int> sizes, const PartitionSpec& family, int degree)
{
    check_sizes(sizes);
    ConvergenceReport report;
    for (int n : sizes) {
        PartitionSpec spec = family;
        spec.n = n;
        const auto space = make_space(generate_partition(spec, degree));
        const auto approx = recipe(space, f);
        report.rows.push_back({n, space->knots().max_step(), sup_error(approx, f), 0.0});
    }
    finish_report(report);
    return report;
}

double derivative_error(const DifferentiationMatrix& d, const SplineSpace& space, const TestFunction& f)
{
    const auto samples = sample_at_greville(space, f.value);
    const auto df = d.apply(samples);
    double err = 0.0;
    for (int i = 0; i < d.size; ++i) {
        if (d.interior_rows[static_cast<std::size_t>(i)]) {
            const double theta = space.greville().theta(i);
            err = std::max(err, std::abs(df[static_cast<std::size_t>(i)] - f.derivative(theta, 1)));
        }
    }
    return err;
}

ConvergenceReport differentiation_study(const std::function<QuasiInterpolant(const SpaceRef&)>& builder,
                                        const TestFunction& f, std::span<const int> sizes,
                                        const PartitionSpec& family, int degree)
{
    check_sizes(sizes);
    ConvergenceReport report;
    for (int n : sizes) {
        PartitionSpec spec = family;
        spec.n = n;
        const auto space = make_space(generate_partition(spec, degree));
        const auto d = differentiation_matrix(builder(space));
        report.rows.push_back({n, space->knots().max_step(), derivative_error(d, *space, f), 0.0});
    }
    finish_report(report);
    return report;
}

} // namespace nbqi
