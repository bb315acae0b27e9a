#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

/// Outcome of the augmented Dickey-Fuller unit-root test.
struct AdfResult {
    double statistic = 0.0;     // t-ratio on the lagged level coefficient
    double p_value = 1.0;       // interpolated from the embedded table
    int used_lag_order = 0;     // number of lagged difference terms
    int n_effective = 0;        // observations entering the regression
    bool is_stationary = false; // p_value < alpha
};

namespace detail {

// Dickey-Fuller critical values, regression with constant and linear trend.
// Source: W.A. Fuller, "Introduction to Statistical Time Series" (1976),
// as tabulated in Banerjee, Dolado, Galbraith & Hendry, "Co-integration,
// Error Correction, and the Econometric Analysis of Non-stationary Data"
// (1993), table 4.2c. Rows are effective sample sizes, columns the
// probabilities {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99}.
// Version 1 of the embedded table; do not edit values in place.
struct DfTrendTableV1 {
    static constexpr std::array<double, 6> sample_sizes = {25, 50, 100, 250, 500, 1e9};
    static constexpr std::array<double, 8> probabilities = {0.01, 0.025, 0.05, 0.10,
                                                            0.90, 0.95, 0.975, 0.99};
    static constexpr std::array<std::array<double, 8>, 6> quantiles = {{
        {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
        {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
        {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
        {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
        {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
        {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
    }};
};

/// Piecewise-linear interpolation with clamping outside the table.
inline double interp_clamped(double x, const double* xs, const double* ys, int n) {
    if (x <= xs[0]) return ys[0];
    if (x >= xs[n - 1]) return ys[n - 1];
    int i = 0;
    while (x > xs[i + 1]) ++i;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

inline double df_trend_p_value(double statistic, int n_effective) {
    using T = DfTrendTableV1;
    std::array<double, 8> quantile_at_n{};
    for (int c = 0; c < 8; ++c) {
        std::array<double, 6> col{};
        for (int r = 0; r < 6; ++r) col[r] = T::quantiles[r][c];
        quantile_at_n[c] = interp_clamped(static_cast<double>(n_effective),
                                          T::sample_sizes.data(), col.data(), 6);
    }
    return interp_clamped(statistic, quantile_at_n.data(), T::probabilities.data(), 8);
}

/// Thin QR (modified Gram-Schmidt) least squares; returns coefficients and
/// fills `inv_gram_diag` with the requested diagonal entry of (X'X)^-1.
/// Columns are stored contiguously in `cols`.
inline std::vector<double> qr_least_squares(std::vector<std::vector<double>>& cols,
                                            const std::vector<double>& y, int diag_index,
                                            double& inv_gram_diag, double& ssr) {
    const int p = static_cast<int>(cols.size());
    const int n = static_cast<int>(y.size());
    std::vector<std::vector<double>> q = cols;
    std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));

    double scale = 0.0;
    for (const auto& col : cols)
        for (double v : col) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) throw DataError("adf_test: degenerate regression (all-zero design)");

    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < j; ++i) {
            double dot = 0.0;
            for (int t = 0; t < n; ++t) dot += q[i][t] * q[j][t];
            r[i][j] = dot;
            for (int t = 0; t < n; ++t) q[j][t] -= dot * q[i][t];
        }
        double nrm = 0.0;
        for (int t = 0; t < n; ++t) nrm += q[j][t] * q[j][t];
        nrm = std::sqrt(nrm);
        if (nrm <= 1e-10 * scale * std::sqrt(static_cast<double>(n)))
            throw DataError("adf_test: degenerate regression (collinear or constant regressors)");
        r[j][j] = nrm;
        for (int t = 0; t < n; ++t) q[j][t] /= nrm;
    }

    std::vector<double> qty(p, 0.0);
    for (int j = 0; j < p; ++j)
        for (int t = 0; t < n; ++t) qty[j] += q[j][t] * y[t];

    std::vector<double> beta(p, 0.0);
    for (int j = p - 1; j >= 0; --j) {
        double acc = qty[j];
        for (int k = j + 1; k < p; ++k) acc -= r[j][k] * beta[k];
        beta[j] = acc / r[j][j];
    }

    ssr = 0.0;
    for (int t = 0; t < n; ++t) {
        double fit = 0.0;
        for (int j = 0; j < p; ++j) fit += cols[j][t] * beta[j];
        const double e = y[t] - fit;
        ssr += e * e;
    }

    // (X'X)^-1 diag entry via w = R^-T e_j, entry = |w|^2.
    std::vector<double> w(p, 0.0);
    for (int i = 0; i < p; ++i) {
        double acc = (i == diag_index) ? 1.0 : 0.0;
        for (int k = 0; k < i; ++k) acc -= r[k][i] * w[k];
        w[i] = acc / r[i][i];
    }
    inv_gram_diag = 0.0;
    for (int i = 0; i < p; ++i) inv_gram_diag += w[i] * w[i];
    return beta;
}

}  // namespace detail

/// Augmented Dickey-Fuller test, regression with constant and linear trend:
///
///   dy[t] = a + b*t + g*y[t-1] + sum_{i=1..k} d_i * dy[t-i] + e[t]
///
/// with lag order k = floor((n-1)^(1/3)). The reported statistic is the
/// t-ratio on g; the p-value interpolates the embedded trend-case table and
/// clamps to [0.01, 0.99] outside it.
inline AdfResult adf_test(const Series& series, double alpha = 0.05) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("adf_test: alpha must be in (0,1)");
    const std::vector<double>& y = series.values;
    const int n = static_cast<int>(y.size());
    if (n < 3) throw DataError("adf_test: series too short");
    for (double v : y)
        if (is_missing(v)) throw DataError("adf_test: series contains missing values");

    const int k = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n - 1))));
    const int n_eff = n - 1 - k;
    const int p = 3 + k;
    if (n_eff < 12 || n_eff <= p)
        throw DataError("adf_test: series too short (" + std::to_string(n_eff) +
                        " effective observations after lag trimming; need >= 12 and > " +
                        std::to_string(p) + " regressors)");

    std::vector<double> dy(n - 1);
    for (int t = 1; t < n; ++t) dy[t - 1] = y[t] - y[t - 1];

    // Columns: intercept, trend, lagged level, k lagged differences.
    std::vector<std::vector<double>> cols(p, std::vector<double>(n_eff));
    std::vector<double> rhs(n_eff);
    // Dependent increments dy[t] for t in [k, n-2]; dy[t] = y[t+1] - y[t],
    // so the lagged level is y[t] and the k augmentation terms dy[t-1..t-k].
    for (int row = 0; row < n_eff; ++row) {
        const int t = row + k;
        rhs[row] = dy[t];
        cols[0][row] = 1.0;
        cols[1][row] = static_cast<double>(t + 1);
        cols[2][row] = y[t];
        for (int i = 1; i <= k; ++i) cols[3 + i - 1][row] = dy[t - i];
    }

    double inv_gram = 0.0, ssr = 0.0;
    const std::vector<double> beta = detail::qr_least_squares(cols, rhs, 2, inv_gram, ssr);

    const double sigma2 = ssr / static_cast<double>(n_eff - p);
    const double se = std::sqrt(sigma2 * inv_gram);
    if (!(se > 0.0)) throw DataError("adf_test: degenerate regression (zero residual variance)");

    AdfResult res;
    res.statistic = beta[2] / se;
    res.used_lag_order = k;
    res.n_effective = n_eff;
    res.p_value = detail::df_trend_p_value(res.statistic, n_eff);
    res.is_stationary = res.p_value < alpha;
    return res;
}

}  // namespace flowcast
