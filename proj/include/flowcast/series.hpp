#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"

namespace flowcast {

/// Missing samples are carried as NaN until interpolate_missing runs.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/// A named univariate sequence. Timestamps are optional; when present they
/// must be strictly increasing and as long as the values.
struct Series {
    std::string name;
    std::vector<double> values;
    std::vector<double> timestamps;  // empty when absent

    Series() = default;
    Series(std::string n, std::vector<double> v) : name(std::move(n)), values(std::move(v)) {}

    std::size_t size() const { return values.size(); }

    bool has_missing() const {
        for (double v : values)
            if (is_missing(v)) return true;
        return false;
    }

    void validate() const {
        if (!timestamps.empty()) {
            if (timestamps.size() != values.size())
                throw DataError("series '" + name + "': timestamp count differs from value count");
            for (std::size_t i = 1; i < timestamps.size(); ++i)
                if (!(timestamps[i] > timestamps[i - 1]))
                    throw DataError("series '" + name + "': timestamps not strictly increasing");
        }
    }
};

/// Multi-feature table; column 0 is the forecast target, the rest are
/// regressors. All features share the same length.
struct Dataset {
    std::vector<Series> features;

    std::size_t n() const { return features.empty() ? 0 : features[0].size(); }
    std::size_t m() const { return features.size(); }

    const Series& target() const {
        if (features.empty()) throw DataError("dataset has no features");
        return features[0];
    }

    void validate() const {
        if (features.empty()) throw DataError("dataset must have at least one feature");
        std::set<std::string> names;
        for (const Series& s : features) {
            s.validate();
            if (s.size() != n())
                throw DataError("feature '" + s.name + "' length " + std::to_string(s.size()) +
                                " differs from first feature length " + std::to_string(n()));
            if (!names.insert(s.name).second)
                throw DataError("duplicate feature name '" + s.name + "'");
        }
    }
};

/// Ordered collection of equidimensional datasets ("parallel" inputs that are
/// modeled jointly). z is the member count.
struct ParallelDataset {
    std::vector<Dataset> members;

    std::size_t z() const { return members.size(); }
    std::size_t n() const { return members.empty() ? 0 : members[0].n(); }
    std::size_t m() const { return members.empty() ? 0 : members[0].m(); }
};

/// Bundles the datasets and verifies they are equidimensional. The error
/// names the first offending member and its shape.
inline ParallelDataset assemble_parallel(std::vector<Dataset> datasets) {
    if (datasets.empty()) throw DataError("assemble_parallel: empty dataset collection");
    const std::size_t n0 = datasets[0].n();
    const std::size_t m0 = datasets[0].m();
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        datasets[i].validate();
        if (datasets[i].n() != n0 || datasets[i].m() != m0)
            throw DataError("assemble_parallel: dimension mismatch at member " + std::to_string(i) +
                            ": (n=" + std::to_string(datasets[i].n()) + ", m=" +
                            std::to_string(datasets[i].m()) + ") vs (n=" + std::to_string(n0) +
                            ", m=" + std::to_string(m0) + ")");
    }
    ParallelDataset p;
    p.members = std::move(datasets);
    return p;
}

/// Fills gaps by linear interpolation between the bracketing known samples.
/// Leading/trailing gaps take the nearest known value (flat extension).
/// Known samples are passed through unchanged.
inline Series interpolate_missing(const Series& series) {
    std::size_t known = 0;
    for (double v : series.values)
        if (!is_missing(v)) ++known;
    if (known == 0) throw DataError("interpolate_missing: series '" + series.name + "' is entirely missing");
    if (known < 2) throw DataError("interpolate_missing: series '" + series.name + "' has fewer than two known values");

    Series out = series;
    const std::size_t n = out.values.size();

    std::size_t first = 0;
    while (is_missing(out.values[first])) ++first;
    std::size_t last = n - 1;
    while (is_missing(out.values[last])) --last;
    for (std::size_t i = 0; i < first; ++i) out.values[i] = out.values[first];
    for (std::size_t i = last + 1; i < n; ++i) out.values[i] = out.values[last];

    std::size_t i = first;
    while (i <= last) {
        if (!is_missing(out.values[i])) {
            ++i;
            continue;
        }
        std::size_t lo = i - 1;           // known by construction
        std::size_t hi = i;
        while (is_missing(out.values[hi])) ++hi;
        const double step = (out.values[hi] - out.values[lo]) / static_cast<double>(hi - lo);
        for (std::size_t t = i; t < hi; ++t)
            out.values[t] = out.values[lo] + step * static_cast<double>(t - lo);
        i = hi + 1;
    }
    return out;
}

}  // namespace flowcast
