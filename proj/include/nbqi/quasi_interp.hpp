#pragma once

/**
 * @file quasi_interp.hpp
 * @brief Differential and discrete spline quasi-interpolants on Greville sites.
 *
 * A discrete quasi-interpolant is Qf = sum_i mu_i(f) B_i with
 * mu_i(f) = sum_s w_i(s) f(theta_{i+s}). It is exact on P_q when
 * mu_i(e_r) = theta_i^{(r)} for all r <= q.
 *
 * Stencils whose nominal sites leave J are pulled inward: the outer sites are
 * clamped to the ends of J and the three weights are re-solved for exactness
 * on P_2. The two extreme indices (theta = a and theta = b) use f(theta).
 *
 * Norm bounds for three-point stencils are stated for simple knots. Stencils
 * that sample a site whose Greville window contains a repeated end knot are
 * flagged as boundary stencils and reported separately.
 */

#include "nbqi/bspline.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nbqi {

enum class QiKind { dqi, q2star, qp2star, nearbest };

[[nodiscard]] std::string to_string(QiKind kind);
[[nodiscard]] QiKind qi_kind_from_string(const std::string& name);

/// One coefficient functional mu_i: weights attached to Greville offsets.
struct Stencil {
    int center = 0;
    std::vector<int> offsets;
    std::vector<double> weights;
    /// True when the nominal offsets were truncated at an end of J, or when a
    /// sampled site lies outside in_simple_knot_region.
    bool boundary = false;

    [[nodiscard]] double l1_norm() const;
    [[nodiscard]] double weight_sum() const;
    /// Applies the functional to samples indexed by J.
    [[nodiscard]] double apply(std::span<const double> samples) const;

    bool operator==(const Stencil&) const = default;
};

class QuasiInterpolant {
public:
    QuasiInterpolant(SpaceRef space, QiKind kind, int p, int q, std::vector<Stencil> stencils);

    [[nodiscard]] const SplineSpace& space() const noexcept { return *space_; }
    [[nodiscard]] const SpaceRef& space_ref() const noexcept { return space_; }
    [[nodiscard]] QiKind kind() const noexcept { return kind_; }
    /// Half-width of the nominal site window.
    [[nodiscard]] int reach() const noexcept { return p_; }
    /// Exactness order: polynomials of degree <= q are reproduced.
    [[nodiscard]] int exactness() const noexcept { return q_; }
    [[nodiscard]] const std::vector<Stencil>& stencils() const noexcept { return stencils_; }
    [[nodiscard]] const Stencil& stencil(int i) const { return stencils_.at(static_cast<std::size_t>(i)); }

private:
    SpaceRef space_;
    QiKind kind_;
    int p_;
    int q_;
    std::vector<Stencil> stencils_;
};

/// Returns (f(x), f'(x), ..., f^{(max_order)}(x)).
using DerivativeOracle = std::function<std::vector<double>(double x, int max_order)>;

/// a_s(theta_i) = sum_{l<=s} (-1)^{s-l} C(s,l) theta_i^{s-l} theta_i^{(l)}, s = 0..m.
/// a_0 = 1 and a_1 = 0.
[[nodiscard]] std::vector<double> dqi_coefficients(const SplineSpace& space, int i);

/// Coefficients c_i = sum_l a_l(theta_i) D^l f(theta_i) / l!. Projector onto
/// the spline space and exact on P_m.
[[nodiscard]] SplineFunction apply_dqi(const SpaceRef& space, const DerivativeOracle& oracle);

/// True when T_j contains no repeated end knot, i.e. m-1 <= j <= n.
[[nodiscard]] bool in_simple_knot_region(const SplineSpace& space, int j);

/// P_2-exact weights at sites (left, center, right) for a functional centred at
/// `center` with centered second moment `spread`:
/// mu(f) = f(center) - spread * [left, center, right] f.
[[nodiscard]] std::array<double, 3> three_point_weights(double left, double center, double right, double spread);

/// Three-point stencils at offsets (-1, 0, 1); exact on P_min(2,m).
[[nodiscard]] QuasiInterpolant build_q2star(const SpaceRef& space);

/// Three-point stencils at offsets (-p, 0, p). Requires p >= m.
[[nodiscard]] QuasiInterpolant build_qp2star(const SpaceRef& space, int p);

/// Coefficients c_i = mu_i(samples); one sample per Greville site.
[[nodiscard]] SplineFunction apply_qi(const QuasiInterpolant& qi, std::span<const double> samples);

/// f evaluated at every Greville abscissa.
[[nodiscard]] std::vector<double> sample_at_greville(const SplineSpace& space, const std::function<double(double)>& f);

/// nu_1(Q) = max_i ||w_i||_1 over all stencils.
[[nodiscard]] double norm_upper_bound(const QuasiInterpolant& qi);

/// max_i ||w_i||_1 restricted to stencils with (without) the boundary flag;
/// 1 when there are none.
[[nodiscard]] double interior_norm_upper_bound(const QuasiInterpolant& qi);
[[nodiscard]] double boundary_norm_upper_bound(const QuasiInterpolant& qi);

/// floor((m+4)/2) for q2star; (m+1)/(m-1) for qp2star and nearbest (m >= 2).
[[nodiscard]] double theoretical_bound(QiKind kind, int m);

/// Record with kind, m, p, q and per-index offsets/weights. Weights are stored
/// as numbers; the serializer writes shortest round-trip decimals.
[[nodiscard]] nlohmann::json to_json(const QuasiInterpolant& qi);
/// Rebuilds an operator on `space`; throws std::invalid_argument if the record
/// does not match the space.
[[nodiscard]] QuasiInterpolant quasi_interpolant_from_json(const nlohmann::json& record, SpaceRef space);

} // namespace nbqi
