#pragma once

#include "rmdp/errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace rmdp::detail {

/// Dense row-major square matrix, sized at construction.
class Matrix {
public:
    Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws numerical_error when a pivot degenerates (singular system).
inline std::vector<double> solve_linear(Matrix a, std::vector<double> b,
                                        const std::string& context = "linear solve") {
    const std::size_t n = a.size();
    if (b.size() != n) throw numerical_error(context + ": dimension mismatch");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t row = col + 1; row < n; ++row) {
            const double v = std::abs(a(row, col));
            if (v > best) { best = v; pivot = row; }
        }
        if (best < 1e-13)
            throw numerical_error(context + ": singular matrix (pivot " +
                                  std::to_string(best) + " at column " + std::to_string(col) + ")");
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a(row, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(row, j) -= factor * a(col, j);
            b[row] -= factor * b[col];
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

} // namespace rmdp::detail
