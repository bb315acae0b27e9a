#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/model.hpp"
#include "flowcast/normalize.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

enum class WalkMode { Recursive, TeacherForced };

inline const char* to_string(WalkMode m) {
    return m == WalkMode::Recursive ? "recursive" : "teacher_forced";
}

inline WalkMode walk_mode_from_string(const std::string& s) {
    if (s == "recursive") return WalkMode::Recursive;
    if (s == "teacher_forced") return WalkMode::TeacherForced;
    throw ConfigError("unknown walk mode '" + s + "' (choose recursive, teacher_forced)");
}

/// Baseline forecaster P(t) = y(t-1) over [region_begin, region_end).
inline std::vector<double> persistence_forecast(const Series& series, std::size_t region_begin,
                                                std::size_t region_end) {
    if (region_begin == 0) throw DataError("persistence_forecast: region starts at index 0");
    if (region_end > series.size() || region_begin >= region_end)
        throw DataError("persistence_forecast: invalid region");
    std::vector<double> pred(region_end - region_begin);
    for (std::size_t t = region_begin; t < region_end; ++t)
        pred[t - region_begin] = series.values[t - 1];
    return pred;
}

/// One-step-at-a-time forecasts over a region of a feature table.
struct WalkForwardResult {
    std::size_t region_begin = 0;
    std::size_t msteps = 1;
    std::size_t z = 1;
    /// First-step forecasts, [count x z]; forecast row k targets time
    /// region_begin + k. count = region_len - msteps + 1.
    Matrix first_step;
    /// All steps, [count x msteps*z] in (step, member) layout.
    Matrix all_steps;
};

/// Walks a predictor over `data` (rows = time, cols = m*z features laid out
/// member-major) across the region [region_begin, region_end). The lookback
/// window is seeded from the nlags rows preceding the region. Recursive mode
/// feeds the predictor's own first-step target predictions back into later
/// windows; teacher-forced mode always reads ground truth. Exogenous features
/// stay ground truth in both modes. Predictions come back in the scale of
/// `data`.
///
/// Predictor: callable (const Matrix& window[nlags x m*z]) -> Matrix[msteps x z].
template <typename Predictor>
WalkForwardResult walk_forward(Predictor&& predict, const Matrix& data, std::size_t nlags,
                               std::size_t msteps, std::size_t m, std::size_t z,
                               std::size_t region_begin, std::size_t region_end, WalkMode mode) {
    const std::size_t n = static_cast<std::size_t>(data.rows);
    if (nlags < 1 || msteps < 1) throw ConfigError("walk_forward: nlags and msteps must be >= 1");
    if (static_cast<std::size_t>(data.cols) != m * z)
        throw DataError("walk_forward: data width != m*z");
    if (region_begin < nlags)
        throw DataError("walk_forward: region needs " + std::to_string(nlags) +
                        " preceding samples to seed the window");
    if (region_end > n || region_begin >= region_end ||
        region_end - region_begin < msteps)
        throw DataError("walk_forward: region too short (need >= msteps samples)");

    const std::size_t region_len = region_end - region_begin;
    const std::size_t count = region_len - msteps + 1;

    WalkForwardResult res;
    res.region_begin = region_begin;
    res.msteps = msteps;
    res.z = z;
    res.first_step = Matrix(static_cast<int>(count), static_cast<int>(z));
    res.all_steps = Matrix(static_cast<int>(count), static_cast<int>(msteps * z));

    // Feedback buffer: model-made target values for times >= region_begin.
    Matrix fed = data;

    Matrix window(static_cast<int>(nlags), static_cast<int>(m * z));
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t t0 = region_begin + k;  // first predicted time
        for (std::size_t lag = 0; lag < nlags; ++lag) {
            const std::size_t u = t0 - nlags + lag;
            const double* src =
                (mode == WalkMode::Recursive) ? fed.row(static_cast<int>(u)) : data.row(static_cast<int>(u));
            std::copy(src, src + m * z, window.row(static_cast<int>(lag)));
        }
        const Matrix pred = predict(window);
        if (pred.rows != static_cast<int>(msteps) || pred.cols != static_cast<int>(z))
            throw DataError("walk_forward: predictor returned wrong shape");
        std::copy(pred.d.begin(), pred.d.end(), res.all_steps.row(static_cast<int>(k)));
        for (std::size_t j = 0; j < z; ++j) {
            res.first_step(static_cast<int>(k), static_cast<int>(j)) = pred(0, static_cast<int>(j));
            // Target of member j sits at column j*m.
            fed(static_cast<int>(t0), static_cast<int>(j * m)) = pred(0, static_cast<int>(j));
        }
    }
    return res;
}

/// Model + normalizer convenience: normalizes each member, walks the model,
/// denormalizes the predictions back to original units.
inline WalkForwardResult walk_forward_model(const ForecastModel& model,
                                            const std::vector<Normalizer>& normalizers,
                                            const ParallelDataset& data, std::size_t region_begin,
                                            std::size_t region_end, WalkMode mode) {
    const std::size_t m = data.m(), z = data.z(), n = data.n();
    if (normalizers.size() != z) throw DataError("walk_forward: one normalizer per member required");

    Matrix table(static_cast<int>(n), static_cast<int>(m * z));
    for (std::size_t j = 0; j < z; ++j)
        for (std::size_t f = 0; f < m; ++f)
            for (std::size_t t = 0; t < n; ++t)
                table(static_cast<int>(t), static_cast<int>(j * m + f)) =
                    normalizers[j].normalize_value(f, data.members[j].features[f].values[t]);

    WalkForwardResult res = walk_forward(
        [&](const Matrix& window) { return model.predict_window(window.d.data()); }, table,
        static_cast<std::size_t>(model.spec.nlags), static_cast<std::size_t>(model.spec.msteps), m,
        z, region_begin, region_end, mode);

    for (int k = 0; k < res.first_step.rows; ++k)
        for (std::size_t j = 0; j < z; ++j) {
            res.first_step(k, static_cast<int>(j)) =
                normalizers[j].denormalize_value(0, res.first_step(k, static_cast<int>(j)));
            for (std::size_t s = 0; s < res.msteps; ++s) {
                double& v = res.all_steps(k, static_cast<int>(s * z + j));
                v = normalizers[j].denormalize_value(0, v);
            }
        }
    return res;
}

}  // namespace flowcast
