#include "nbqi/knots.hpp"

#include "nbqi/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nbqi {

KnotVector::KnotVector(double a, double b, std::span<const double> interior, int degree)
    : degree_(degree), spans_(static_cast<int>(interior.size()) + 1)
{
    if (degree < 1) {
        throw std::invalid_argument("knots: degree must be >= 1");
    }
    if (!(a < b)) {
        throw std::invalid_argument("knots: need a < b");
    }
    for (std::size_t k = 0; k < interior.size(); ++k) {
        const double x = interior[k];
        if (!(x > a && x < b)) {
            throw std::invalid_argument("knots: interior knot " + io::format_double(x) + " outside (a, b)");
        }
        if (k > 0 && !(x > interior[k - 1])) {
            throw std::invalid_argument("knots: interior knots must be strictly increasing");
        }
    }
    knots_.reserve(interior.size() + 2 * static_cast<std::size_t>(degree) + 2);
    knots_.insert(knots_.end(), static_cast<std::size_t>(degree) + 1, a);
    knots_.insert(knots_.end(), interior.begin(), interior.end());
    knots_.insert(knots_.end(), static_cast<std::size_t>(degree) + 1, b);
}

double KnotVector::step(int k) const
{
    if (k < 1 || k > spans_) {
        return 0.0;
    }
    return t(k) - t(k - 1);
}

double KnotVector::max_step() const
{
    double h = 0.0;
    for (int k = 1; k <= spans_; ++k) {
        h = std::max(h, step(k));
    }
    return h;
}

std::vector<double> KnotVector::interior() const
{
    const auto first = knots_.begin() + degree_ + 1;
    return {first, first + (spans_ - 1)};
}

KnotVector make_clamped_knots(double a, double b, std::span<const double> interior, int degree)
{
    return KnotVector(a, b, interior, degree);
}

std::string to_string(PartitionFamily family)
{
    switch (family) {
    case PartitionFamily::uniform: return "uniform";
    case PartitionFamily::arithmetic: return "arithmetic";
    case PartitionFamily::geometric: return "geometric";
    case PartitionFamily::seeded_random: return "random";
    }
    return "unknown";
}

PartitionFamily partition_family_from_string(const std::string& name)
{
    if (name == "uniform") return PartitionFamily::uniform;
    if (name == "arithmetic") return PartitionFamily::arithmetic;
    if (name == "geometric") return PartitionFamily::geometric;
    if (name == "random" || name == "seeded-random") return PartitionFamily::seeded_random;
    throw std::invalid_argument("unknown partition family '" + name + "'");
}

std::map<std::string, std::string> PartitionSpec::to_record() const
{
    return {
        {"family", to_string(family)},
        {"a", io::format_double(a)},
        {"b", io::format_double(b)},
        {"n", std::to_string(n)},
        {"ratio", io::format_double(ratio)},
        {"seed", std::to_string(seed)},
    };
}

PartitionSpec PartitionSpec::from_record(const std::map<std::string, std::string>& record)
{
    PartitionSpec spec;
    for (const auto& [key, value] : record) {
        if (key == "family") {
            spec.family = partition_family_from_string(value);
        } else if (key == "a") {
            spec.a = io::parse_double(value);
        } else if (key == "b") {
            spec.b = io::parse_double(value);
        } else if (key == "n") {
            spec.n = static_cast<int>(io::parse_int(value));
        } else if (key == "ratio") {
            spec.ratio = io::parse_double(value);
        } else if (key == "seed") {
            spec.seed = io::parse_uint64(value);
        } else {
            throw std::invalid_argument("partition record: unknown key '" + key + "'");
        }
    }
    return spec;
}

namespace {

// 53 random bits mapped to [0, 1); independent of the standard library's
// distribution implementations so sequences are stable across toolchains.
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> interior_from_weights(double a, double b, const std::vector<double>& weights)
{
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> interior;
    interior.reserve(weights.size() - 1);
    double partial = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        partial += weights[k];
        interior.push_back(a + (b - a) * (partial / total));
    }
    return interior;
}

} // namespace

KnotVector generate_partition(const PartitionSpec& spec, int degree)
{
    if (spec.n < 1) {
        throw std::invalid_argument("partition: n must be >= 1");
    }
    const auto n = static_cast<std::size_t>(spec.n);
    std::vector<double> interior;
    switch (spec.family) {
    case PartitionFamily::uniform:
        for (std::size_t k = 1; k < n; ++k) {
            interior.push_back(spec.a + static_cast<double>(k) * (spec.b - spec.a) / static_cast<double>(n));
        }
        break;
    case PartitionFamily::arithmetic: {
        if (!(spec.ratio >= 0.0)) {
            throw std::invalid_argument("partition: arithmetic increment must be >= 0");
        }
        std::vector<double> w(n);
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = 1.0 + static_cast<double>(k) * spec.ratio;
        }
        interior = interior_from_weights(spec.a, spec.b, w);
        break;
    }
    case PartitionFamily::geometric: {
        if (!(spec.ratio > 0.0)) {
            throw std::invalid_argument("partition: geometric ratio must be > 0");
        }
        std::vector<double> w(n);
        double h = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = h;
            h *= spec.ratio;
        }
        interior = interior_from_weights(spec.a, spec.b, w);
        break;
    }
    case PartitionFamily::seeded_random: {
        std::mt19937_64 rng(spec.seed);
        std::vector<double> w(n);
        for (auto& x : w) {
            x = std::pow(10.0, -3.0 * unit_draw(rng));
        }
        interior = interior_from_weights(spec.a, spec.b, w);
        break;
    }
    }
    return KnotVector(spec.a, spec.b, interior, degree);
}

std::vector<double> elementary_symmetric(std::span<const double> values)
{
    std::vector<double> e(values.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t k = i + 1; k >= 1; --k) {
            e[k] += values[i] * e[k - 1];
        }
    }
    return e;
}

std::vector<double> normalized_moments(std::span<const double> window)
{
    auto e = elementary_symmetric(window);
    const auto m = window.size();
    double binom = 1.0;
    for (std::size_t l = 1; l <= m; ++l) {
        binom = binom * static_cast<double>(m - l + 1) / static_cast<double>(l);
        e[l] /= binom;
    }
    return e;
}

double centered_second_moment(std::span<const double> window)
{
    const auto m = window.size();
    if (m < 2) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t s = r + 1; s < m; ++s) {
            const double d = window[r] - window[s];
            sum += d * d;
        }
    }
    const auto md = static_cast<double>(m);
    return sum / (md * md * (md - 1.0));
}

GrevilleGrid greville_grid(const KnotVector& kv)
{
    const int m = kv.degree();
    const int dim = kv.dimension();
    const auto knots = kv.knots();

    GrevilleGrid grid;
    grid.degree = m;
    grid.abscissae.resize(static_cast<std::size_t>(dim));
    grid.moments.resize(static_cast<std::size_t>(dim));
    grid.centered_second.resize(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        // T_j = t_{j-m+1}..t_j, stored at offsets j+1..j+m.
        const auto window = knots.subspan(static_cast<std::size_t>(j + 1), static_cast<std::size_t>(m));
        auto& moments = grid.moments[static_cast<std::size_t>(j)];
        moments = normalized_moments(window);
        grid.abscissae[static_cast<std::size_t>(j)] = moments[1];
        grid.centered_second[static_cast<std::size_t>(j)] = centered_second_moment(window);
    }
    for (int j = 1; j < dim; ++j) {
        if (!(grid.theta(j) > grid.theta(j - 1))) {
            throw std::invalid_argument("greville: abscissae not strictly increasing at index " + std::to_string(j));
        }
    }
    return grid;
}

} // namespace nbqi
