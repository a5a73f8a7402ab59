#pragma once

// Dense two-phase primal simplex for tiny standard-form problems
//
//     minimize c^T x  subject to  A x = b,  x >= 0
//
// Entering and leaving variables follow Bland's lowest-index rule, so the
// method terminates on degenerate problems. Not meant for anything beyond a
// few dozen columns.

#include <span>
#include <string>
#include <vector>

namespace nbqi::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

[[nodiscard]] std::string to_string(Status status);

struct Problem {
    int rows = 0;
    int cols = 0;
    /// Row-major rows x cols.
    std::vector<double> matrix;
    std::vector<double> rhs;
    std::vector<double> cost;

    [[nodiscard]] double at(int r, int c) const { return matrix[static_cast<std::size_t>(r * cols + c)]; }
};

struct Options {
    double pivot_tolerance = 1e-11;
    /// Feasibility tolerance on the phase-one objective, relative to max(1, |b|_1).
    double feasibility_tolerance = 1e-9;
    int max_iterations = 1000;
};

struct Result {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /// Pivots performed over both phases.
    int iterations = 0;
    /// Columns basic at termination (redundant rows removed).
    std::vector<int> basis;
};

[[nodiscard]] Result solve(const Problem& problem, const Options& options = {});

} // namespace nbqi::lp
