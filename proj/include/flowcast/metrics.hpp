#pragma once

#include <cmath>
#include <span>
#include <string>

#include "flowcast/errors.hpp"

namespace flowcast {

inline double mae(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size()) throw DataError("mae: length mismatch");
    if (truth.empty()) throw DataError("mae: empty inputs");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) acc += std::fabs(pred[i] - truth[i]);
    return acc / static_cast<double>(truth.size());
}

inline double rmse(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size()) throw DataError("rmse: length mismatch");
    if (truth.empty()) throw DataError("rmse: empty inputs");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double e = pred[i] - truth[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(truth.size()));
}

}  // namespace flowcast
