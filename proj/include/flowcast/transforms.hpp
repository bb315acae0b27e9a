#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "flowcast/errors.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

struct LogTransformResult {
    Series series;
    bool skipped_negative = false;  // input had negatives; returned unchanged
    bool used_log1p = false;        // input had zeros; log(1+x) branch
};

/// Logarithmic rescale with graceful degradation: natural log when strictly
/// positive, log1p when zeros are present, identity (with a warning flag)
/// when negatives make a log scale meaningless.
inline LogTransformResult log_transform(const Series& series) {
    LogTransformResult r;
    r.series = series;
    if (series.values.empty()) return r;
    const double lo = *std::min_element(series.values.begin(), series.values.end());
    if (lo < 0.0) {
        r.skipped_negative = true;
        return r;
    }
    if (lo > 0.0) {
        for (double& v : r.series.values) v = std::log(v);
    } else {
        r.used_log1p = true;
        for (double& v : r.series.values) v = std::log1p(v);
    }
    return r;
}

/// Iterated first difference: out[t] = in[t+1] - in[t], applied `order` times.
inline Series difference(const Series& series, std::size_t order = 1) {
    if (order == 0) throw DataError("difference: order must be positive");
    if (series.size() <= order)
        throw DataError("difference: series '" + series.name + "' length " +
                        std::to_string(series.size()) + " <= order " + std::to_string(order));
    Series out = series;
    out.timestamps.clear();
    for (std::size_t k = 0; k < order; ++k) {
        std::vector<double> next(out.values.size() - 1);
        for (std::size_t t = 0; t + 1 < out.values.size(); ++t)
            next[t] = out.values[t + 1] - out.values[t];
        out.values = std::move(next);
    }
    return out;
}

}  // namespace flowcast
