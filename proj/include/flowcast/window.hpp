#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

/// Chronological split: train takes the first floor(n*fraction) samples, test
/// the remainder. No shuffling.
inline std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset,
                                                    double split_fraction = 0.8) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw ConfigError("train_test_split: fraction must be in (0,1)");
    dataset.validate();
    const std::size_t n = dataset.n();
    const std::size_t n_tr = static_cast<std::size_t>(static_cast<double>(n) * split_fraction);

    Dataset train, test;
    for (const Series& f : dataset.features) {
        Series a(f.name, std::vector<double>(f.values.begin(), f.values.begin() + n_tr));
        Series b(f.name, std::vector<double>(f.values.begin() + n_tr, f.values.end()));
        if (!f.timestamps.empty()) {
            a.timestamps.assign(f.timestamps.begin(), f.timestamps.begin() + n_tr);
            b.timestamps.assign(f.timestamps.begin() + n_tr, f.timestamps.end());
        }
        train.features.push_back(std::move(a));
        test.features.push_back(std::move(b));
    }
    return {std::move(train), std::move(test)};
}

inline std::pair<ParallelDataset, ParallelDataset> train_test_split(const ParallelDataset& parallel,
                                                                    double split_fraction = 0.8) {
    ParallelDataset train, test;
    for (const Dataset& member : parallel.members) {
        auto [a, b] = train_test_split(member, split_fraction);
        train.members.push_back(std::move(a));
        test.members.push_back(std::move(b));
    }
    return {std::move(train), std::move(test)};
}

/// Supervised input/output arrays produced by sliding-window transformation.
/// One buffer backs both the 2-D and the 3-D view of each array, so the
/// row-major flattening identity holds by construction:
///
///   X: [N x nlags*m*z]   viewed 3-D as [N x nlags x m*z]
///   Y: [N x msteps*z]    viewed 3-D as [N x msteps x z]
///   N = n - (nlags + msteps - 1)
///
/// Within a time step features are laid out member-major: member 0's m
/// features, then member 1's, and so on. Targets are each member's feature 0.
struct SupervisedTensors {
    Matrix x;  // [N x nlags*m*z]
    Matrix y;  // [N x msteps*z]
    std::size_t n_rows = 0;
    std::size_t nlags = 0;
    std::size_t msteps = 0;
    std::size_t m = 0;
    std::size_t z = 0;

    std::size_t input_dim() const { return m * z; }
    std::size_t output_dim() const { return z; }

    double x3(std::size_t row, std::size_t lag, std::size_t feature) const {
        return x(static_cast<int>(row), static_cast<int>(lag * m * z + feature));
    }
    double y3(std::size_t row, std::size_t step, std::size_t member) const {
        return y(static_cast<int>(row), static_cast<int>(step * z + member));
    }
};

inline SupervisedTensors make_supervised(const ParallelDataset& parallel, std::size_t nlags,
                                         std::size_t msteps) {
    if (parallel.members.empty()) throw DataError("make_supervised: empty parallel dataset");
    if (nlags < 1 || msteps < 1)
        throw ConfigError("make_supervised: nlags and msteps must be >= 1");
    const std::size_t n = parallel.n();
    if (n < nlags + msteps)
        throw DataError("make_supervised: need n >= nlags + msteps, got " + std::to_string(n) +
                        " < " + std::to_string(nlags + msteps));

    SupervisedTensors t;
    t.nlags = nlags;
    t.msteps = msteps;
    t.m = parallel.m();
    t.z = parallel.z();
    t.n_rows = n - (nlags + msteps - 1);
    t.x = Matrix(static_cast<int>(t.n_rows), static_cast<int>(nlags * t.m * t.z));
    t.y = Matrix(static_cast<int>(t.n_rows), static_cast<int>(msteps * t.z));

    for (std::size_t i = 0; i < t.n_rows; ++i) {
        double* xrow = t.x.row(static_cast<int>(i));
        for (std::size_t lag = 0; lag < nlags; ++lag)
            for (std::size_t j = 0; j < t.z; ++j)
                for (std::size_t f = 0; f < t.m; ++f)
                    xrow[lag * t.m * t.z + j * t.m + f] =
                        parallel.members[j].features[f].values[i + lag];
        double* yrow = t.y.row(static_cast<int>(i));
        for (std::size_t s = 0; s < msteps; ++s)
            for (std::size_t j = 0; j < t.z; ++j)
                yrow[s * t.z + j] = parallel.members[j].features[0].values[i + nlags + s];
    }
    return t;
}

}  // namespace flowcast
