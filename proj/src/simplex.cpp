#include "nbqi/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace nbqi::lp {

std::string to_string(Status status)
{
    switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

// Tableau over the structural columns followed by one artificial per row;
// the last column holds the right-hand side.
class Tableau {
public:
    Tableau(const Problem& pb, double tol) : rows_(pb.rows), structural_(pb.cols), width_(pb.cols + pb.rows + 1), tol_(tol)
    {
        data_.assign(static_cast<std::size_t>(rows_ * width_), 0.0);
        basis_.resize(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r) {
            const double sign = pb.rhs[static_cast<std::size_t>(r)] < 0.0 ? -1.0 : 1.0;
            for (int c = 0; c < structural_; ++c) {
                at(r, c) = sign * pb.at(r, c);
            }
            at(r, structural_ + r) = 1.0;
            at(r, rhs_col()) = sign * pb.rhs[static_cast<std::size_t>(r)];
            basis_[static_cast<std::size_t>(r)] = structural_ + r;
        }
    }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r * width_ + c)]; }
    [[nodiscard]] double at(int r, int c) const { return data_[static_cast<std::size_t>(r * width_ + c)]; }
    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int rhs_col() const { return width_ - 1; }
    [[nodiscard]] bool is_artificial(int c) const { return c >= structural_; }
    [[nodiscard]] const std::vector<int>& basis() const { return basis_; }

    void pivot(int pr, int pc)
    {
        const double inv = 1.0 / at(pr, pc);
        for (int c = 0; c < width_; ++c) {
            at(pr, c) *= inv;
        }
        at(pr, pc) = 1.0;
        for (int r = 0; r < rows_; ++r) {
            if (r == pr) {
                continue;
            }
            const double factor = at(r, pc);
            if (factor == 0.0) {
                continue;
            }
            for (int c = 0; c < width_; ++c) {
                at(r, c) -= factor * at(pr, c);
            }
            at(r, pc) = 0.0;
        }
        basis_[static_cast<std::size_t>(pr)] = pc;
    }

    void drop_row(int r)
    {
        data_.erase(data_.begin() + r * width_, data_.begin() + (r + 1) * width_);
        basis_.erase(basis_.begin() + r);
        --rows_;
    }

    // Runs Bland-rule iterations on the given cost vector (indexed over all
    // columns; disallowed columns never enter). Returns the status of the phase.
    Status optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, int& iterations, int max_iterations)
    {
        const int cols = width_ - 1;
        while (true) {
            int entering = -1;
            for (int c = 0; c < cols && entering < 0; ++c) {
                if (!allowed[static_cast<std::size_t>(c)] || is_basic(c)) {
                    continue;
                }
                double reduced = cost[static_cast<std::size_t>(c)];
                for (int r = 0; r < rows_; ++r) {
                    reduced -= cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] * at(r, c);
                }
                if (reduced < -tol_) {
                    entering = c;
                }
            }
            if (entering < 0) {
                return Status::optimal;
            }
            int leaving = -1;
            double best = 0.0;
            for (int r = 0; r < rows_; ++r) {
                const double a = at(r, entering);
                if (a <= tol_) {
                    continue;
                }
                const double ratio = at(r, rhs_col()) / a;
                if (leaving < 0 || ratio < best ||
                    (ratio == best && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leaving)])) {
                    leaving = r;
                    best = ratio;
                }
            }
            if (leaving < 0) {
                return Status::unbounded;
            }
            if (iterations >= max_iterations) {
                return Status::iteration_limit;
            }
            pivot(leaving, entering);
            ++iterations;
        }
    }

private:
    [[nodiscard]] bool is_basic(int c) const
    {
        for (int b : basis_) {
            if (b == c) {
                return true;
            }
        }
        return false;
    }

    int rows_;
    int structural_;
    int width_;
    double tol_;
    std::vector<double> data_;
    std::vector<int> basis_;
};

} // namespace

Result solve(const Problem& problem, const Options& options)
{
    if (problem.rows < 0 || problem.cols < 0 ||
        problem.matrix.size() != static_cast<std::size_t>(problem.rows * problem.cols) ||
        problem.rhs.size() != static_cast<std::size_t>(problem.rows) ||
        problem.cost.size() != static_cast<std::size_t>(problem.cols)) {
        throw std::invalid_argument("lp: inconsistent problem dimensions");
    }
    Tableau tab(problem, options.pivot_tolerance);
    const int total = problem.cols + problem.rows;
    Result result;

    // Phase one: minimize the sum of artificials.
    std::vector<double> phase1(static_cast<std::size_t>(total), 0.0);
    std::vector<bool> allowed(static_cast<std::size_t>(total), true);
    double rhs_scale = 1.0;
    for (int r = 0; r < problem.rows; ++r) {
        phase1[static_cast<std::size_t>(problem.cols + r)] = 1.0;
        rhs_scale += std::abs(problem.rhs[static_cast<std::size_t>(r)]);
    }
    auto status = tab.optimize(phase1, allowed, result.iterations, options.max_iterations);
    if (status == Status::iteration_limit) {
        result.status = status;
        return result;
    }
    double infeasibility = 0.0;
    for (int r = 0; r < tab.rows(); ++r) {
        if (tab.is_artificial(tab.basis()[static_cast<std::size_t>(r)])) {
            infeasibility += tab.at(r, tab.rhs_col());
        }
    }
    if (infeasibility > options.feasibility_tolerance * rhs_scale) {
        result.status = Status::infeasible;
        return result;
    }

    // Pivot zero-level artificials out of the basis; rows where that is
    // impossible are linearly dependent and get dropped.
    for (int r = 0; r < tab.rows();) {
        if (!tab.is_artificial(tab.basis()[static_cast<std::size_t>(r)])) {
            ++r;
            continue;
        }
        int column = -1;
        for (int c = 0; c < problem.cols; ++c) {
            if (std::abs(tab.at(r, c)) > options.pivot_tolerance) {
                column = c;
                break;
            }
        }
        if (column < 0) {
            tab.drop_row(r);
            continue;
        }
        tab.pivot(r, column);
        ++r;
    }

    // Phase two on the structural columns.
    std::vector<double> phase2(static_cast<std::size_t>(total), 0.0);
    for (int c = 0; c < problem.cols; ++c) {
        phase2[static_cast<std::size_t>(c)] = problem.cost[static_cast<std::size_t>(c)];
    }
    for (int c = problem.cols; c < total; ++c) {
        allowed[static_cast<std::size_t>(c)] = false;
    }
    status = tab.optimize(phase2, allowed, result.iterations, options.max_iterations);
    result.status = status;
    if (status != Status::optimal) {
        return result;
    }

    result.x.assign(static_cast<std::size_t>(problem.cols), 0.0);
    for (int r = 0; r < tab.rows(); ++r) {
        const int b = tab.basis()[static_cast<std::size_t>(r)];
        result.x[static_cast<std::size_t>(b)] = tab.at(r, tab.rhs_col());
    }
    result.objective = 0.0;
    for (int c = 0; c < problem.cols; ++c) {
        result.objective += problem.cost[static_cast<std::size_t>(c)] * result.x[static_cast<std::size_t>(c)];
    }
    result.basis = tab.basis();
    return result;
}

} // namespace nbqi::lp
