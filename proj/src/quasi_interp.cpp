#include "nbqi/quasi_interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbqi {

std::string to_string(QiKind kind)
{
    switch (kind) {
    case QiKind::dqi: return "dqi";
    case QiKind::q2star: return "q2star";
    case QiKind::qp2star: return "qp2star";
    case QiKind::nearbest: return "nearbest";
    }
    return "unknown";
}

QiKind qi_kind_from_string(const std::string& name)
{
    if (name == "dqi") return QiKind::dqi;
    if (name == "q2star") return QiKind::q2star;
    if (name == "qp2star") return QiKind::qp2star;
    if (name == "nearbest") return QiKind::nearbest;
    throw std::invalid_argument("unknown operator kind '" + name + "'");
}

double Stencil::l1_norm() const
{
    double sum = 0.0;
    for (double w : weights) {
        sum += std::abs(w);
    }
    return sum;
}

double Stencil::weight_sum() const
{
    double sum = 0.0;
    for (double w : weights) {
        sum += w;
    }
    return sum;
}

double Stencil::apply(std::span<const double> samples) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        sum += weights[k] * samples[static_cast<std::size_t>(center + offsets[k])];
    }
    return sum;
}

QuasiInterpolant::QuasiInterpolant(SpaceRef space, QiKind kind, int p, int q, std::vector<Stencil> stencils)
    : space_(std::move(space)), kind_(kind), p_(p), q_(q), stencils_(std::move(stencils))
{
    if (!space_) {
        throw std::invalid_argument("quasi-interpolant: null space");
    }
    const int dim = space_->dimension();
    if (stencils_.size() != static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("quasi-interpolant: expected one stencil per basis function");
    }
    for (int i = 0; i < dim; ++i) {
        const auto& st = stencils_[static_cast<std::size_t>(i)];
        if (st.center != i || st.offsets.size() != st.weights.size()) {
            throw std::invalid_argument("quasi-interpolant: malformed stencil at index " + std::to_string(i));
        }
        for (int s : st.offsets) {
            if (i + s < 0 || i + s >= dim) {
                throw std::invalid_argument("quasi-interpolant: stencil " + std::to_string(i) + " samples outside J");
            }
        }
    }
}

std::vector<double> dqi_coefficients(const SplineSpace& space, int i)
{
    // a_s(theta_i) is the s-th normalized symmetric moment of the window
    // T_i - theta_i (blossom of (x - theta_i)^s); expanding the binomial gives
    // the alternating sum over theta_i^{(l)} without its cancellation.
    const int m = space.degree();
    const double theta = space.greville().theta(i);
    const auto knots = space.knots().knots();
    std::vector<double> window(knots.begin() + i + 1, knots.begin() + i + 1 + m);
    for (auto& t : window) {
        t -= theta;
    }
    auto a = normalized_moments(window);
    a[1] = 0.0;
    return a;
}

SplineFunction apply_dqi(const SpaceRef& space, const DerivativeOracle& oracle)
{
    const int m = space->degree();
    const int dim = space->dimension();
    std::vector<double> coefficients(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double theta = space->greville().theta(i);
        const auto derivs = oracle(theta, m);
        if (derivs.size() < static_cast<std::size_t>(m) + 1) {
            throw std::runtime_error("dqi: oracle returned too few derivatives at index " + std::to_string(i));
        }
        const auto a = dqi_coefficients(*space, i);
        double c = 0.0;
        double factorial = 1.0;
        for (int l = 0; l <= m; ++l) {
            if (l > 0) {
                factorial *= l;
            }
            c += a[static_cast<std::size_t>(l)] * derivs[static_cast<std::size_t>(l)] / factorial;
        }
        coefficients[static_cast<std::size_t>(i)] = c;
    }
    return {space, std::move(coefficients)};
}

bool in_simple_knot_region(const SplineSpace& space, int j)
{
    return j >= space.degree() - 1 && j <= space.knots().spans();
}

std::array<double, 3> three_point_weights(double left, double center, double right, double spread)
{
    const double dl = center - left;
    const double dr = right - center;
    const double width = right - left;
    if (!(dl > 0.0) || !(dr > 0.0)) {
        throw std::invalid_argument("three-point stencil: sites must be strictly increasing");
    }
    return {-spread / (width * dl), 1.0 + spread / (dr * dl), -spread / (width * dr)};
}

namespace {

Stencil point_evaluation(int i, bool boundary)
{
    return {i, {0}, {1.0}, boundary};
}

QuasiInterpolant build_three_point(const SpaceRef& space, QiKind kind, int p)
{
    const int dim = space->dimension();
    const auto& grid = space->greville();
    std::vector<Stencil> stencils;
    stencils.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const int lo = std::max(i - p, 0);
        const int hi = std::min(i + p, dim - 1);
        const bool boundary = lo != i - p || hi != i + p || !in_simple_knot_region(*space, lo) ||
                              !in_simple_knot_region(*space, hi);
        if (lo == i || hi == i) {
            stencils.push_back(point_evaluation(i, boundary));
            continue;
        }
        const auto w = three_point_weights(grid.theta(lo), grid.theta(i), grid.theta(hi), grid.spread(i));
        stencils.push_back({i, {lo - i, 0, hi - i}, {w[0], w[1], w[2]}, boundary});
    }
    return {space, kind, p, std::min(2, space->degree()), std::move(stencils)};
}

} // namespace

QuasiInterpolant build_q2star(const SpaceRef& space)
{
    return build_three_point(space, QiKind::q2star, 1);
}

QuasiInterpolant build_qp2star(const SpaceRef& space, int p)
{
    if (p < space->degree()) {
        throw std::invalid_argument("qp2star: p = " + std::to_string(p) + " < m = " +
                                    std::to_string(space->degree()) + " is not covered by the uniform bound");
    }
    return build_three_point(space, QiKind::qp2star, p);
}

SplineFunction apply_qi(const QuasiInterpolant& qi, std::span<const double> samples)
{
    const int dim = qi.space().dimension();
    if (samples.size() != static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("apply_qi: expected " + std::to_string(dim) + " samples, got " +
                                    std::to_string(samples.size()));
    }
    std::vector<double> coefficients(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        coefficients[static_cast<std::size_t>(i)] = qi.stencil(i).apply(samples);
    }
    return {qi.space_ref(), std::move(coefficients)};
}

std::vector<double> sample_at_greville(const SplineSpace& space, const std::function<double(double)>& f)
{
    const auto& theta = space.greville().abscissae;
    std::vector<double> out(theta.size());
    std::transform(theta.begin(), theta.end(), out.begin(), f);
    return out;
}

double norm_upper_bound(const QuasiInterpolant& qi)
{
    double nu = 0.0;
    for (const auto& st : qi.stencils()) {
        nu = std::max(nu, st.l1_norm());
    }
    return nu;
}

double interior_norm_upper_bound(const QuasiInterpolant& qi)
{
    double nu = 1.0;
    for (const auto& st : qi.stencils()) {
        if (!st.boundary) {
            nu = std::max(nu, st.l1_norm());
        }
    }
    return nu;
}

double boundary_norm_upper_bound(const QuasiInterpolant& qi)
{
    double nu = 1.0;
    for (const auto& st : qi.stencils()) {
        if (st.boundary) {
            nu = std::max(nu, st.l1_norm());
        }
    }
    return nu;
}

double theoretical_bound(QiKind kind, int m)
{
    switch (kind) {
    case QiKind::q2star:
        if (m < 1) {
            throw std::invalid_argument("theoretical_bound: m must be >= 1");
        }
        return static_cast<double>((m + 4) / 2);
    case QiKind::qp2star:
    case QiKind::nearbest:
        if (m < 2) {
            throw std::invalid_argument("theoretical_bound: the (m+1)/(m-1) bound needs m >= 2");
        }
        return static_cast<double>(m + 1) / static_cast<double>(m - 1);
    case QiKind::dqi:
        break;
    }
    throw std::invalid_argument("theoretical_bound: no bound for kind " + to_string(kind));
}

nlohmann::json to_json(const QuasiInterpolant& qi)
{
    nlohmann::json stencils = nlohmann::json::array();
    for (const auto& st : qi.stencils()) {
        stencils.push_back({
            {"center", st.center},
            {"offsets", st.offsets},
            {"weights", st.weights},
            {"boundary", st.boundary},
        });
    }
    return {
        {"kind", to_string(qi.kind())},
        {"m", qi.space().degree()},
        {"p", qi.reach()},
        {"q", qi.exactness()},
        {"dimension", qi.space().dimension()},
        {"stencils", std::move(stencils)},
    };
}

QuasiInterpolant quasi_interpolant_from_json(const nlohmann::json& record, SpaceRef space)
{
    try {
        if (record.at("m").get<int>() != space->degree() || record.at("dimension").get<int>() != space->dimension()) {
            throw std::invalid_argument("quasi-interpolant record does not match the spline space");
        }
        std::vector<Stencil> stencils;
        for (const auto& st : record.at("stencils")) {
            stencils.push_back({
                st.at("center").get<int>(),
                st.at("offsets").get<std::vector<int>>(),
                st.at("weights").get<std::vector<double>>(),
                st.at("boundary").get<bool>(),
            });
        }
        return {std::move(space), qi_kind_from_string(record.at("kind").get<std::string>()), record.at("p").get<int>(),
                record.at("q").get<int>(), std::move(stencils)};
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("quasi-interpolant record: ") + e.what());
    }
}

} // namespace nbqi
