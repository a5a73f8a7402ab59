#pragma once

/**
 * @file knots.hpp
 * @brief Clamped knot sequences on [a, b] and the Greville data derived from them.
 *
 * Index conventions follow the classical clamped setting:
 *
 *   a = t_{-m} = ... = t_0 < t_1 < ... < t_{n-1} < t_n = ... = t_{n+m} = b
 *
 * B-spline indices run over J = {0, ..., n+m-1} and B_j is supported on
 * [t_{j-m}, t_{j+1}]. The Greville window of B_j is T_j = {t_{j-m+1}, ..., t_j}.
 */

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nbqi {

/// Clamped knot vector of degree m with n interior spans.
class KnotVector {
public:
    /// Builds the clamped sequence with (m+1)-fold end knots.
    /// Throws std::invalid_argument on m < 1, a >= b, interior knots outside
    /// (a, b) or not strictly increasing.
    KnotVector(double a, double b, std::span<const double> interior, int degree);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    /// Number of knot spans n (interior knot count + 1).
    [[nodiscard]] int spans() const noexcept { return spans_; }
    /// Dimension of the spline space, n + m.
    [[nodiscard]] int dimension() const noexcept { return spans_ + degree_; }
    [[nodiscard]] double left() const noexcept { return knots_.front(); }
    [[nodiscard]] double right() const noexcept { return knots_.back(); }

    /// t_k for -m <= k <= n+m.
    [[nodiscard]] double t(int k) const { return knots_.at(static_cast<std::size_t>(k + degree_)); }
    /// Step h_k = t_k - t_{k-1}; zero outside 1..n.
    [[nodiscard]] double step(int k) const;
    [[nodiscard]] double max_step() const;

    /// Full knot array; element 0 is t_{-m}.
    [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
    /// Interior knots t_1..t_{n-1}.
    [[nodiscard]] std::vector<double> interior() const;

private:
    int degree_;
    int spans_;
    std::vector<double> knots_;
};

/// Validated constructor mirroring the KnotVector constructor.
[[nodiscard]] KnotVector make_clamped_knots(double a, double b, std::span<const double> interior, int degree);

enum class PartitionFamily { uniform, arithmetic, geometric, seeded_random };

[[nodiscard]] std::string to_string(PartitionFamily family);
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] PartitionFamily partition_family_from_string(const std::string& name);

/// Recipe for a deterministic partition of [a, b] into n spans.
///
/// - uniform: equal steps.
/// - arithmetic: steps proportional to 1 + k * ratio, k = 0..n-1 (ratio >= 0).
/// - geometric: h_{k+1} = ratio * h_k.
/// - seeded_random: log-uniform steps 10^{-3u}, u uniform in [0, 1), drawn from
///   a 64-bit Mersenne twister seeded with `seed`, rescaled to fill [a, b].
struct PartitionSpec {
    PartitionFamily family = PartitionFamily::uniform;
    double a = 0.0;
    double b = 1.0;
    int n = 10;
    double ratio = 1.0;
    std::uint64_t seed = 0;

    bool operator==(const PartitionSpec&) const = default;

    /// Flat key-value record: family, a, b, n, ratio, seed.
    [[nodiscard]] std::map<std::string, std::string> to_record() const;
    /// Inverse of to_record; unknown keys are rejected, missing keys keep defaults.
    [[nodiscard]] static PartitionSpec from_record(const std::map<std::string, std::string>& record);
};

[[nodiscard]] KnotVector generate_partition(const PartitionSpec& spec, int degree);

/// Greville abscissae and normalized symmetric-function moments for every j in J.
struct GrevilleGrid {
    int degree = 0;
    /// theta_j, mean of the m knots of T_j.
    std::vector<double> abscissae;
    /// moments[j][l] = sigma_l(T_j) / C(m, l), 0 <= l <= m, with moments[j][0] = 1.
    std::vector<std::vector<double>> moments;
    /// theta_j^2 - theta_j^{(2)}, evaluated from squared pairwise knot differences.
    std::vector<double> centered_second;

    [[nodiscard]] std::size_t size() const noexcept { return abscissae.size(); }
    [[nodiscard]] double theta(int j) const { return abscissae.at(static_cast<std::size_t>(j)); }
    [[nodiscard]] double moment(int j, int l) const
    {
        return moments.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(l));
    }
    [[nodiscard]] double spread(int j) const { return centered_second.at(static_cast<std::size_t>(j)); }
};

/// Elementary symmetric functions sigma_0..sigma_k of the given values
/// (sigma_0 = 1), built up as coefficients of prod (1 + x_i z).
[[nodiscard]] std::vector<double> elementary_symmetric(std::span<const double> values);

/// Normalized moments sigma_l / C(m, l), l = 0..m, of an m-point window.
[[nodiscard]] std::vector<double> normalized_moments(std::span<const double> window);

/// (1 / (m^2 (m-1))) * sum_{r<s} (x_r - x_s)^2 for an m-point window; 0 for m = 1.
[[nodiscard]] double centered_second_moment(std::span<const double> window);

/// Throws std::invalid_argument if the abscissae are not strictly increasing.
[[nodiscard]] GrevilleGrid greville_grid(const KnotVector& kv);

} // namespace nbqi
