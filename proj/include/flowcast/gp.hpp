#pragma once

#include <cmath>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"

namespace flowcast {

/// Gaussian-process regressor for the Bayesian-optimization surrogate.
/// Matern-5/2 kernel with unit signal variance and a fixed length scale in
/// the rescaled [0,1]^d input space; targets are standardized internally.
/// A failed Cholesky factorization escalates the noise tenfold up to a cap;
/// `fit` reports whether any factorization succeeded.
class GaussianProcess {
public:
    explicit GaussianProcess(double length_scale = 0.5, double noise = 1e-6,
                             double max_noise = 1e-2)
        : length_scale_(length_scale), base_noise_(noise), max_noise_(max_noise) {}

    static double matern52(double r, double length_scale) {
        const double s = std::sqrt(5.0) * r / length_scale;
        return (1.0 + s + s * s / 3.0) * std::exp(-s);
    }

    bool fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
        const int n = static_cast<int>(x.size());
        if (n == 0 || y.size() != x.size()) throw DataError("gp: bad training data");
        x_ = x;

        // Standardize targets: unit signal prior matches scaled residuals.
        y_mean_ = 0.0;
        for (double v : y) y_mean_ += v;
        y_mean_ /= n;
        double var = 0.0;
        for (double v : y) var += (v - y_mean_) * (v - y_mean_);
        y_scale_ = n > 1 ? std::sqrt(var / n) : 0.0;
        if (!(y_scale_ > 0.0)) y_scale_ = 1.0;
        std::vector<double> ys(n);
        for (int i = 0; i < n; ++i) ys[i] = (y[i] - y_mean_) / y_scale_;

        Matrix k(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = matern52(distance(x_[i], x_[j]), length_scale_);
                k(i, j) = v;
                k(j, i) = v;
            }

        for (double noise = base_noise_; noise <= max_noise_ * (1.0 + 1e-12); noise *= 10.0) {
            Matrix a = k;
            for (int i = 0; i < n; ++i) a(i, i) += noise;
            if (cholesky(a)) {
                chol_ = std::move(a);
                alpha_ = solve_cholesky(chol_, ys);
                fitted_ = true;
                return true;
            }
        }
        fitted_ = false;
        return false;
    }

    bool fitted() const { return fitted_; }

    /// Posterior mean and variance at a point (destandardized mean; variance
    /// in standardized units, adequate for ranking acquisition values).
    std::pair<double, double> predict(const std::vector<double>& x) const {
        if (!fitted_) throw DataError("gp: predict before fit");
        const int n = static_cast<int>(x_.size());
        std::vector<double> ks(n);
        for (int i = 0; i < n; ++i) ks[i] = matern52(distance(x, x_[i]), length_scale_);

        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += ks[i] * alpha_[i];

        // var = k(x,x) - ks^T K^-1 ks, via one triangular solve.
        std::vector<double> v = forward_solve(chol_, ks);
        double quad = 0.0;
        for (double w : v) quad += w * w;
        const double var = std::max(0.0, 1.0 - quad);
        return {mean * y_scale_ + y_mean_, var * y_scale_ * y_scale_};
    }

private:
    static double distance(const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }

    /// In-place lower Cholesky; false when the matrix is not positive
    /// definite at working precision.
    static bool cholesky(Matrix& a) {
        const int n = a.rows;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = a(i, j);
                for (int k = 0; k < j; ++k) sum -= a(i, k) * a(j, k);
                if (i == j) {
                    if (!(sum > 0.0)) return false;
                    a(i, i) = std::sqrt(sum);
                } else {
                    a(i, j) = sum / a(j, j);
                }
            }
            for (int j = i + 1; j < n; ++j) a(i, j) = 0.0;
        }
        return true;
    }

    static std::vector<double> forward_solve(const Matrix& l, const std::vector<double>& b) {
        const int n = l.rows;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) {
            double acc = b[i];
            for (int k = 0; k < i; ++k) acc -= l(i, k) * x[k];
            x[i] = acc / l(i, i);
        }
        return x;
    }

    static std::vector<double> solve_cholesky(const Matrix& l, const std::vector<double>& b) {
        const int n = l.rows;
        std::vector<double> x = forward_solve(l, b);
        for (int i = n - 1; i >= 0; --i) {
            double acc = x[i];
            for (int k = i + 1; k < n; ++k) acc -= l(k, i) * x[k];
            x[i] = acc / l(i, i);
        }
        return x;
    }

    double length_scale_;
    double base_noise_;
    double max_noise_;
    bool fitted_ = false;
    std::vector<std::vector<double>> x_;
    std::vector<double> alpha_;
    Matrix chol_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
};

}  // namespace flowcast
