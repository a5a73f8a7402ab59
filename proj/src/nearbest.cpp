#include "nbqi/nearbest.hpp"

#include "nbqi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbqi {

double ConstraintSystem::residual(std::span<const double> weights) const
{
    double worst = 0.0;
    double scale = 1.0;
    for (int r = 0; r < rows(); ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols(); ++c) {
            sum += at(r, c) * weights[static_cast<std::size_t>(c)];
        }
        worst = std::max(worst, std::abs(sum - rhs[static_cast<std::size_t>(r)]));
        scale = std::max(scale, std::abs(rhs[static_cast<std::size_t>(r)]));
    }
    return worst / scale;
}

int numerical_rank(std::span<const double> matrix, int rows, int cols, double tolerance)
{
    std::vector<double> a(matrix.begin(), matrix.end());
    const auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r * cols + c); };
    double scale = 0.0;
    for (double x : a) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) {
        return 0;
    }
    int rank = 0;
    std::vector<bool> row_used(static_cast<std::size_t>(rows), false);
    std::vector<bool> col_used(static_cast<std::size_t>(cols), false);
    while (rank < std::min(rows, cols)) {
        int pr = -1;
        int pc = -1;
        double best = 0.0;
        for (int r = 0; r < rows; ++r) {
            if (row_used[static_cast<std::size_t>(r)]) continue;
            for (int c = 0; c < cols; ++c) {
                if (col_used[static_cast<std::size_t>(c)]) continue;
                if (std::abs(a[idx(r, c)]) > best) {
                    best = std::abs(a[idx(r, c)]);
                    pr = r;
                    pc = c;
                }
            }
        }
        if (best <= tolerance * scale) {
            break;
        }
        row_used[static_cast<std::size_t>(pr)] = true;
        col_used[static_cast<std::size_t>(pc)] = true;
        for (int r = 0; r < rows; ++r) {
            if (row_used[static_cast<std::size_t>(r)]) continue;
            const double factor = a[idx(r, pc)] / a[idx(pr, pc)];
            for (int c = 0; c < cols; ++c) {
                a[idx(r, c)] -= factor * a[idx(pr, c)];
            }
        }
        ++rank;
    }
    return rank;
}

ConstraintSystem assemble_constraints(const SplineSpace& space, int i, int p, int q, Scaling scaling)
{
    if (p < 0) {
        throw std::invalid_argument("constraints: p must be >= 0");
    }
    return assemble_constraints(space, i, -p, p, q, scaling);
}

ConstraintSystem assemble_constraints(const SplineSpace& space, int i, int lo, int hi, int q, Scaling scaling)
{
    const int dim = space.dimension();
    const int m = space.degree();
    if (lo > 0 || hi < 0) {
        throw std::invalid_argument("constraints: window must contain offset 0");
    }
    if (q < 0 || q > m || q > hi - lo) {
        throw std::invalid_argument("constraints: need 0 <= q <= min(m, window width), got q = " + std::to_string(q));
    }
    if (i + lo < 0 || i + hi >= dim) {
        throw std::invalid_argument("constraints: window of index " + std::to_string(i) + " leaves J");
    }
    const auto& grid = space.greville();
    ConstraintSystem sys;
    sys.center = i;
    sys.q = q;
    sys.scaling = scaling;
    for (int s = lo; s <= hi; ++s) {
        sys.offsets.push_back(s);
    }

    const auto knots = space.knots().knots();
    std::vector<double> window(knots.begin() + i + 1, knots.begin() + i + 1 + m);
    std::vector<double> sites;
    for (int s = lo; s <= hi; ++s) {
        sites.push_back(grid.theta(i + s));
    }
    if (scaling == Scaling::normalized) {
        sys.shift = grid.theta(i);
        sys.scale = grid.theta(i + hi) - grid.theta(i + lo);
        if (!(sys.scale > 0.0)) {
            sys.scale = 1.0;
        }
        for (auto& x : sites) {
            x = (x - sys.shift) / sys.scale;
        }
        for (auto& t : window) {
            t = (t - sys.shift) / sys.scale;
        }
    }
    const auto moments = normalized_moments(window);

    const int cols = sys.cols();
    sys.matrix.assign(static_cast<std::size_t>((q + 1) * cols), 0.0);
    for (int c = 0; c < cols; ++c) {
        double power = 1.0;
        for (int r = 0; r <= q; ++r) {
            sys.matrix[static_cast<std::size_t>(r * cols + c)] = power;
            power *= sites[static_cast<std::size_t>(c)];
        }
    }
    sys.rhs.assign(moments.begin(), moments.begin() + q + 1);

    if (numerical_rank(sys.matrix, q + 1, cols) != q + 1) {
        throw std::invalid_argument("constraints: Vandermonde system at index " + std::to_string(i) + " is rank deficient");
    }
    return sys;
}

L1Solution solve_l1(const ConstraintSystem& system)
{
    const int rows = system.rows();
    const int n = system.cols();
    lp::Problem pb;
    pb.rows = rows;
    pb.cols = 2 * n;
    pb.matrix.assign(static_cast<std::size_t>(rows * 2 * n), 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) {
            pb.matrix[static_cast<std::size_t>(r * 2 * n + c)] = system.at(r, c);
            pb.matrix[static_cast<std::size_t>(r * 2 * n + n + c)] = -system.at(r, c);
        }
    }
    pb.rhs = system.rhs;
    pb.cost.assign(static_cast<std::size_t>(2 * n), 1.0);

    lp::Options options;
    options.max_iterations = 10 * pb.cols;
    const auto res = lp::solve(pb, options);

    L1Solution out;
    out.offsets = system.offsets;
    out.status = res.status;
    out.iterations = res.iterations;
    if (res.status != lp::Status::optimal) {
        return out;
    }
    out.weights.resize(static_cast<std::size_t>(n));
    out.value = 0.0;
    for (int c = 0; c < n; ++c) {
        const double w = res.x[static_cast<std::size_t>(c)] - res.x[static_cast<std::size_t>(n + c)];
        out.weights[static_cast<std::size_t>(c)] = w;
        out.value += std::abs(w);
    }
    return out;
}

std::vector<double> WatsonForm::weights(std::span<const double> free_params) const
{
    std::vector<double> w = base;
    for (int row = 0; row < rows(); ++row) {
        for (int c = 0; c < cols(); ++c) {
            w[static_cast<std::size_t>(row)] -=
                matrix[static_cast<std::size_t>(row * cols() + c)] * free_params[static_cast<std::size_t>(c)];
        }
    }
    return w;
}

WatsonForm build_watson_form(const SplineSpace& space, int i, int p)
{
    const int dim = space.dimension();
    if (p < 1) {
        throw std::invalid_argument("watson form: p must be >= 1");
    }
    if (i - p < 0 || i + p >= dim) {
        throw std::invalid_argument("watson form: window of index " + std::to_string(i) + " leaves J");
    }
    const auto& grid = space.greville();
    WatsonForm form;
    form.center = i;
    form.p = p;
    for (int s = -p; s <= p; ++s) {
        form.sites.push_back(grid.theta(i + s));
    }
    const auto site = [&](int s) { return form.sites[static_cast<std::size_t>(s + p)]; };
    const double left = site(-p);
    const double mid = site(0);
    const double right = site(p);

    const auto w = three_point_weights(left, mid, right, grid.spread(i));
    form.base.assign(static_cast<std::size_t>(2 * p + 1), 0.0);
    form.base[0] = w[0];
    form.base[static_cast<std::size_t>(p)] = w[1];
    form.base[static_cast<std::size_t>(2 * p)] = w[2];

    const double det = vandermonde3(left, mid, right);
    for (int s = -p + 1; s <= p - 1; ++s) {
        if (s == 0) {
            continue;
        }
        const double x = site(s);
        form.free_offsets.push_back(s);
        if (s < 0) {
            form.alpha.push_back(vandermonde3(x, mid, right) / det);
            form.beta.push_back(vandermonde3(left, x, right) / det);
            form.gamma.push_back(vandermonde3(left, x, mid) / det);
        } else {
            form.alpha.push_back(vandermonde3(mid, x, right) / det);
            form.beta.push_back(vandermonde3(left, x, right) / det);
            form.gamma.push_back(vandermonde3(left, mid, x) / det);
        }
    }

    const int cols = form.cols();
    form.matrix.assign(static_cast<std::size_t>((2 * p + 1) * cols), 0.0);
    const auto entry = [&](int row_offset, int col) -> double& {
        return form.matrix[static_cast<std::size_t>((row_offset + p) * cols + col)];
    };
    for (int c = 0; c < cols; ++c) {
        const int s = form.free_offsets[static_cast<std::size_t>(c)];
        const double a = form.alpha[static_cast<std::size_t>(c)];
        const double b = form.beta[static_cast<std::size_t>(c)];
        const double g = form.gamma[static_cast<std::size_t>(c)];
        if (s < 0) {
            entry(-p, c) = a;
            entry(0, c) = b;
            entry(p, c) = -g;
        } else {
            entry(-p, c) = -a;
            entry(0, c) = b;
            entry(p, c) = g;
        }
        entry(s, c) = -1.0;
    }
    return form;
}

bool knot_condition(const SplineSpace& space, int i, int p)
{
    const int dim = space.dimension();
    if (p < 1 || i - p < 0 || i + p >= dim) {
        throw std::invalid_argument("knot condition: window of index " + std::to_string(i) + " leaves J");
    }
    const auto& g = space.greville();
    const double outer = g.theta(i - p) + g.theta(i + p);
    const double tol = 1e-12 * std::max({1.0, std::abs(g.theta(i - p)), std::abs(g.theta(i + p))});
    return g.theta(i - 1) + g.theta(i) <= outer + tol && outer <= g.theta(i) + g.theta(i + 1) + tol;
}

Certificate watson_certificate(const WatsonForm& form)
{
    const int p = form.p;
    Certificate cert;
    cert.v.assign(static_cast<std::size_t>(2 * p + 1), 0.0);
    const auto v = [&](int s) -> double& { return cert.v[static_cast<std::size_t>(s + p)]; };
    v(-p) = -1.0;
    v(0) = 1.0;
    v(p) = -1.0;
    for (int c = 0; c < form.cols(); ++c) {
        const int s = form.free_offsets[static_cast<std::size_t>(c)];
        const double a = form.alpha[static_cast<std::size_t>(c)];
        const double b = form.beta[static_cast<std::size_t>(c)];
        const double g = form.gamma[static_cast<std::size_t>(c)];
        v(s) = s < 0 ? -a + b + g : a + b - g;
    }
    for (double x : cert.v) {
        cert.max_abs = std::max(cert.max_abs, std::abs(x));
    }
    for (int c = 0; c < form.cols(); ++c) {
        double sum = 0.0;
        for (int s = -p; s <= p; ++s) {
            sum += form.at(s, c) * v(s);
        }
        cert.residual = std::max(cert.residual, std::abs(sum));
    }
    const std::array<int, 3> support{-p, 0, p};
    for (std::size_t k = 0; k < support.size(); ++k) {
        const double w = form.base[static_cast<std::size_t>(support[k] + p)];
        cert.sign_match[k] = w == 0.0 || (w > 0.0) == (v(support[k]) > 0.0);
    }
    cert.certified = cert.max_abs <= 1.0 + 1e-12 && cert.residual <= 1e-10 &&
                     std::all_of(cert.sign_match.begin(), cert.sign_match.end(), [](bool b) { return b; });
    return cert;
}

Certificate watson_certificate(const SplineSpace& space, int i, int p)
{
    return watson_certificate(build_watson_form(space, i, p));
}

std::array<double, 3> dual_multipliers(const WatsonForm& form, const Certificate& certificate)
{
    // y are the monomial coefficients of the quadratic through
    // (theta_{i-p}, v(-p)), (theta_i, v(0)), (theta_{i+p}, v(p)).
    const int p = form.p;
    const double x0 = form.sites.front();
    const double x1 = form.sites[static_cast<std::size_t>(p)];
    const double x2 = form.sites.back();
    const double v0 = certificate.v.front();
    const double v1 = certificate.v[static_cast<std::size_t>(p)];
    const double v2 = certificate.v.back();
    const double d1 = (v1 - v0) / (x1 - x0);
    const double d12 = (v2 - v1) / (x2 - x1);
    const double d2 = (d12 - d1) / (x2 - x0);
    return {v0 - d1 * x0 + d2 * x0 * x1, d1 - d2 * (x0 + x1), d2};
}

NearBestResult build_nearbest_qi(const SpaceRef& space, int p, int q)
{
    const int m = space->degree();
    const int dim = space->dimension();
    if (p < 1) {
        throw std::invalid_argument("nearbest: p must be >= 1");
    }
    if (q < 0 || q > std::min(m, 2 * p)) {
        throw std::invalid_argument("nearbest: need 0 <= q <= min(m, 2p)");
    }
    std::vector<std::string> warnings;
    if (p < m) {
        warnings.push_back("p = " + std::to_string(p) + " < m = " + std::to_string(m) +
                           ": the (m+1)/(m-1) bound is not guaranteed");
    }

    std::vector<Stencil> stencils;
    std::vector<IndexReport> reports;
    double nu1 = 1.0;
    double boundary_nu1 = 1.0;
    for (int i = 0; i < dim; ++i) {
        IndexReport rep;
        rep.index = i;
        rep.lo = std::max(-p, -i);
        rep.hi = std::min(p, dim - 1 - i);
        const bool truncated = rep.lo != -p || rep.hi != p;
        rep.boundary = truncated || !in_simple_knot_region(*space, i + rep.lo) ||
                       !in_simple_knot_region(*space, i + rep.hi);

        Stencil st{i, {}, {}, rep.boundary};
        if (rep.lo == 0 || rep.hi == 0) {
            rep.solution.offsets = {0};
            rep.solution.weights = {1.0};
            rep.solution.value = 1.0;
            rep.solution.status = lp::Status::optimal;
            st.offsets = {0};
            st.weights = {1.0};
        } else {
            try {
                rep.system = assemble_constraints(*space, i, rep.lo, rep.hi, q, Scaling::normalized);
            } catch (const std::invalid_argument& e) {
                throw NumericalError(i, e.what());
            }
            rep.solution = solve_l1(rep.system);
            if (rep.solution.status != lp::Status::optimal) {
                throw NumericalError(i, "l1 problem ended with status " + lp::to_string(rep.solution.status));
            }
            for (std::size_t k = 0; k < rep.solution.offsets.size(); ++k) {
                if (rep.solution.weights[k] != 0.0) {
                    st.offsets.push_back(rep.solution.offsets[k]);
                    st.weights.push_back(rep.solution.weights[k]);
                }
            }
            if (q == 2 && !truncated) {
                const auto form = build_watson_form(*space, i, p);
                double closed = 0.0;
                for (double w : form.base) {
                    closed += std::abs(w);
                }
                rep.closed_form_value = closed;
                rep.knot_condition = knot_condition(*space, i, p);
                rep.certificate = watson_certificate(form);
            }
        }
        if (rep.boundary) {
            boundary_nu1 = std::max(boundary_nu1, rep.solution.value);
        } else {
            nu1 = std::max(nu1, rep.solution.value);
        }
        stencils.push_back(std::move(st));
        reports.push_back(std::move(rep));
    }
    return {QuasiInterpolant(space, QiKind::nearbest, p, q, std::move(stencils)), nu1, boundary_nu1, std::move(reports),
            std::move(warnings)};
}

nlohmann::json audit_record(const IndexReport& report)
{
    nlohmann::json v = nlohmann::json::array();
    for (int r = 0; r < report.system.rows() && !report.system.offsets.empty(); ++r) {
        std::vector<double> row;
        for (int c = 0; c < report.system.cols(); ++c) {
            row.push_back(report.system.at(r, c));
        }
        v.push_back(row);
    }
    std::vector<int> support;
    for (std::size_t k = 0; k < report.solution.offsets.size(); ++k) {
        if (report.solution.weights[k] != 0.0) {
            support.push_back(report.solution.offsets[k]);
        }
    }
    nlohmann::json rec = {
        {"index", report.index},
        {"lo", report.lo},
        {"hi", report.hi},
        {"boundary", report.boundary},
        {"V", std::move(v)},
        {"b", report.system.rhs},
        {"scaling", report.system.scaling == Scaling::normalized ? "normalized" : "none"},
        {"status", lp::to_string(report.solution.status)},
        {"iterations", report.solution.iterations},
        {"optimum", report.solution.value},
        {"offsets", report.solution.offsets},
        {"weights", report.solution.weights},
        {"support", support},
    };
    if (report.closed_form_value) {
        rec["closed_form"] = *report.closed_form_value;
        rec["gap"] = *report.closed_form_value - report.solution.value;
    } else {
        rec["closed_form"] = nullptr;
        rec["gap"] = nullptr;
    }
    rec["knot_condition"] = report.knot_condition ? nlohmann::json(*report.knot_condition) : nlohmann::json(nullptr);
    if (report.certificate) {
        rec["certificate"] = report.certificate->certified ? "pass" : "fail";
        rec["certificate_max_abs"] = report.certificate->max_abs;
        rec["certificate_residual"] = report.certificate->residual;
    } else {
        rec["certificate"] = nullptr;
    }
    return rec;
}

} // namespace nbqi
