#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

/// Sample autocorrelation coefficients for lags 0..max_lag; r[0] == 1.
struct AcfResult {
    std::vector<double> coefficients;

    std::size_t max_lag() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

/// r_k = sum_{t}(y_t - mean)(y_{t+k} - mean) / sum_t (y_t - mean)^2
inline AcfResult acf(const Series& series, std::size_t max_lag) {
    const std::vector<double>& y = series.values;
    const std::size_t n = y.size();
    if (n < 2) throw DataError("acf: series '" + series.name + "' needs at least two samples");
    if (max_lag >= n)
        throw DataError("acf: max_lag " + std::to_string(max_lag) + " must be < length " +
                        std::to_string(n));

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    double denom = 0.0;
    for (double v : y) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw DataError("acf: zero variance in series '" + series.name + "'");

    AcfResult r;
    r.coefficients.resize(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) num += (y[t] - mean) * (y[t + k] - mean);
        r.coefficients[k] = num / denom;
    }
    r.coefficients[0] = 1.0;
    return r;
}

/// Indices p with values[p] strictly above both neighbours and >= everything
/// within `sensitivity` positions on each side (window clipped at the ends).
/// Ascending order; endpoints can never be peaks.
inline std::vector<std::size_t> find_peaks(const std::vector<double>& values,
                                           std::size_t sensitivity) {
    if (sensitivity < 1) throw ConfigError("find_peaks: sensitivity must be >= 1");
    std::vector<std::size_t> peaks;
    if (values.size() < 3) return peaks;
    for (std::size_t p = 1; p + 1 < values.size(); ++p) {
        if (!(values[p] > values[p - 1] && values[p] > values[p + 1])) continue;
        bool dominant = true;
        const std::size_t lo = p > sensitivity ? p - sensitivity : 0;
        const std::size_t hi = std::min(values.size() - 1, p + sensitivity);
        for (std::size_t q = lo; q <= hi && dominant; ++q)
            if (q != p && values[q] > values[p]) dominant = false;
        if (dominant) peaks.push_back(p);
    }
    return peaks;
}

}  // namespace flowcast
