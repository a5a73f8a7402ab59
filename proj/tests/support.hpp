#pragma once

// Independent oracles and partition batteries shared by the unit tests and
// the acceptance runner. Nothing here calls into the code under test except
// to build knot vectors.

#include "nbqi/knots.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace nbqi::testing {

// Naive recursive Cox-de Boor on the full knot vector u (0/0 := 0), with the
// last non-degenerate span closed on the right.
inline double cox_de_boor(std::span<const double> u, int j, int m, double x)
{
    if (m == 0) {
        const double lo = u[static_cast<std::size_t>(j)];
        const double hi = u[static_cast<std::size_t>(j) + 1];
        if (lo < hi && lo <= x && x < hi) {
            return 1.0;
        }
        if (lo < hi && x == hi && hi == u.back()) {
            return 1.0;
        }
        return 0.0;
    }
    const double uj = u[static_cast<std::size_t>(j)];
    const double ujm = u[static_cast<std::size_t>(j + m)];
    const double uj1 = u[static_cast<std::size_t>(j + 1)];
    const double ujm1 = u[static_cast<std::size_t>(j + m + 1)];
    double value = 0.0;
    if (ujm > uj) {
        value += (x - uj) / (ujm - uj) * cox_de_boor(u, j, m - 1, x);
    }
    if (ujm1 > uj1) {
        value += (ujm1 - x) / (ujm1 - uj1) * cox_de_boor(u, j + 1, m - 1, x);
    }
    return value;
}

// Mean of products over all l-subsets of the window, by brute-force subset
// enumeration.
inline double subset_moment(std::span<const double> window, int l)
{
    const int m = static_cast<int>(window.size());
    double sum = 0.0;
    long long count = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != l) {
            continue;
        }
        double prod = 1.0;
        for (int k = 0; k < m; ++k) {
            if (mask & (1u << k)) {
                prod *= window[static_cast<std::size_t>(k)];
            }
        }
        sum += prod;
        ++count;
    }
    return sum / static_cast<double>(count);
}

inline double det3(const std::array<std::array<double, 3>, 3>& a)
{
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Cramer's rule for a 3x3 system; returns NaNs when singular.
inline std::array<double, 3> cramer3(const std::array<std::array<double, 3>, 3>& a, const std::array<double, 3>& b)
{
    const double d = det3(a);
    std::array<double, 3> x{};
    if (std::abs(d) < 1e-300) {
        x.fill(std::numeric_limits<double>::quiet_NaN());
        return x;
    }
    for (int c = 0; c < 3; ++c) {
        auto ac = a;
        for (int r = 0; r < 3; ++r) {
            ac[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = b[static_cast<std::size_t>(r)];
        }
        x[static_cast<std::size_t>(c)] = det3(ac) / d;
    }
    return x;
}

// Minimum l1 norm of lambda subject to sum_s lambda_s (x_s - c)^r = rhs_r,
// r = 0, 1, 2, over every basic solution (three active columns). An l1
// minimum under three equality constraints is attained at such a vertex.
inline double brute_force_l1(std::span<const double> sites, double center, const std::array<double, 3>& rhs)
{
    const int k = static_cast<int>(sites.size());
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            for (int c = b + 1; c < k; ++c) {
                std::array<std::array<double, 3>, 3> mat{};
                const int cols[3] = {a, b, c};
                for (int j = 0; j < 3; ++j) {
                    const double d = sites[static_cast<std::size_t>(cols[j])] - center;
                    mat[0][static_cast<std::size_t>(j)] = 1.0;
                    mat[1][static_cast<std::size_t>(j)] = d;
                    mat[2][static_cast<std::size_t>(j)] = d * d;
                }
                const auto x = cramer3(mat, rhs);
                if (std::isnan(x[0])) {
                    continue;
                }
                best = std::min(best, std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]));
            }
        }
    }
    return best;
}

struct BatteryCase {
    PartitionSpec spec;
    const char* label;
};

// Seeded random partitions with n varying over 6..22, then arithmetic and
// geometric families.
inline std::vector<BatteryCase> partition_battery(int random_count)
{
    std::vector<BatteryCase> cases;
    for (int t = 0; t < random_count; ++t) {
        PartitionSpec s;
        s.family = PartitionFamily::seeded_random;
        s.n = 6 + t % 17;
        s.seed = 1000 + static_cast<std::uint64_t>(t);
        cases.push_back({s, "random"});
    }
    for (double inc : {0.25, 1.0, 3.0}) {
        for (int n : {8, 15}) {
            PartitionSpec s;
            s.family = PartitionFamily::arithmetic;
            s.n = n;
            s.ratio = inc;
            cases.push_back({s, "arithmetic"});
        }
    }
    for (double r : {1.5, 2.0, 4.0}) {
        for (int n : {8, 12}) {
            PartitionSpec s;
            s.family = PartitionFamily::geometric;
            s.n = n;
            s.ratio = r;
            cases.push_back({s, "geometric"});
        }
    }
    return cases;
}

inline PartitionSpec uniform_spec(int n, double a = 0.0, double b = 1.0)
{
    PartitionSpec s;
    s.family = PartitionFamily::uniform;
    s.a = a;
    s.b = b;
    s.n = n;
    return s;
}

inline PartitionSpec random_spec(int n, std::uint64_t seed)
{
    PartitionSpec s;
    s.family = PartitionFamily::seeded_random;
    s.n = n;
    s.seed = seed;
    return s;
}

} // namespace nbqi::testing
