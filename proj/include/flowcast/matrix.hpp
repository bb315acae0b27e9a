#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace flowcast {

/// Dense row-major matrix of doubles. Minimal on purpose: the network code
/// wants contiguous rows for the inner gemv loops, nothing more.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> d;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return d[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return d[static_cast<std::size_t>(r) * cols + c];
    }

    double* row(int r) { return d.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return d.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return d.size(); }
    void fill(double v) { std::fill(d.begin(), d.end(), v); }
};

/// y += M * x  (y has M.rows elements, x has M.cols). Four explicit
/// accumulators so the reduction vectorizes without reassociation flags.
inline void gemv_add(const Matrix& m, const double* x, double* y) {
    const int cols = m.cols;
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        int c = 0;
        for (; c + 4 <= cols; c += 4) {
            a0 += row[c] * x[c];
            a1 += row[c + 1] * x[c + 1];
            a2 += row[c + 2] * x[c + 2];
            a3 += row[c + 3] * x[c + 3];
        }
        for (; c < cols; ++c) a0 += row[c] * x[c];
        y[r] += (a0 + a1) + (a2 + a3);
    }
}

/// y += M^T * x  (y has M.cols elements, x has M.rows)
inline void gemv_t_add(const Matrix& m, const double* x, double* y) {
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        const double xr = x[r];
        for (int c = 0; c < m.cols; ++c) y[c] += row[c] * xr;
    }
}

/// M += a * b^T  (outer product accumulate; a has M.rows, b has M.cols)
inline void outer_add(Matrix& m, const double* a, const double* b) {
    for (int r = 0; r < m.rows; ++r) {
        double* row = m.row(r);
        const double ar = a[r];
        for (int c = 0; c < m.cols; ++c) row[c] += ar * b[c];
    }
}

}  // namespace flowcast
