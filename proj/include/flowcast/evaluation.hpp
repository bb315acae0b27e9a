#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

/// Wall-clock phase timers for runtime accounting.
class PhaseTimers {
public:
    void start(const std::string& phase) {
        running_phase_ = phase;
        phase_start_ = clock::now();
    }
    void stop() {
        if (running_phase_.empty()) return;
        const double secs = std::chrono::duration<double>(clock::now() - phase_start_).count();
        bool found = false;
        for (auto& [name, total] : phases_)
            if (name == running_phase_) {
                total += secs;
                found = true;
            }
        if (!found) phases_.emplace_back(running_phase_, secs);
        running_phase_.clear();
    }
    double seconds(const std::string& phase) const {
        for (const auto& [name, total] : phases_)
            if (name == phase) return total;
        return 0.0;
    }
    const std::vector<std::pair<std::string, double>>& phases() const { return phases_; }

private:
    using clock = std::chrono::steady_clock;
    std::vector<std::pair<std::string, double>> phases_;
    std::string running_phase_;
    clock::time_point phase_start_;
};

/// Lower median: the element at index (k-1)/2 of the sorted values, so an
/// even count reports an actually observed value.
inline double lower_median(std::vector<double> values) {
    if (values.empty()) throw DataError("lower_median: empty input");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

/// Split-level error metrics of a single evaluation run, original units.
struct SplitMetrics {
    double mae = 0.0;
    double rmse = 0.0;
};

/// One end-to-end train+evaluate pass under one seed.
struct SingleRun {
    SplitMetrics validation;
    SplitMetrics test;
    /// Denormalized predictions aligned to time: {time index, member, truth,
    /// prediction, split label} rows live in the report emitter; here only
    /// the raw arrays are kept.
    Matrix val_predictions;   // [count_val x z] first-step forecasts
    Matrix test_predictions;  // [count_test x z]
    Matrix test_all_steps;    // [count_test x msteps*z]
    std::size_t val_begin = 0;   // time index of the first validation forecast
    std::size_t test_begin = 0;  // time index of the first test forecast
};

/// Median-of-k protocol output. Metric medians are taken per metric and per
/// split independently; the reported predictions come from the repeat whose
/// test MAE equals the (lower) median.
struct RepeatedEvaluation {
    int repeats = 1;
    std::string aggregation = "median-of-1";
    SplitMetrics validation_median;
    SplitMetrics test_median;
    int reported_repeat = 0;       // index of the repeat backing `reported`
    SingleRun reported;
    std::vector<SingleRun> runs;   // in repeat order
};

/// Runs `run_once(seed)` `repeats` times with seeds derived from the master
/// seed and aggregates per the median protocol. A crash in any repeat aborts
/// with the repeat index attached.
inline RepeatedEvaluation repeated_evaluation(
    const std::function<SingleRun(std::uint64_t seed)>& run_once, int repeats,
    std::uint64_t master_seed) {
    if (repeats < 1) throw ConfigError("repeated_evaluation: repeats must be >= 1");

    RepeatedEvaluation out;
    out.repeats = repeats;
    out.aggregation = "median-of-" + std::to_string(repeats);
    out.runs.reserve(repeats);
    for (int i = 0; i < repeats; ++i) {
        try {
            out.runs.push_back(run_once(derive_seed(master_seed, static_cast<std::uint64_t>(i))));
        } catch (const std::exception& e) {
            throw std::runtime_error("repeated_evaluation: repeat " + std::to_string(i) +
                                     " failed: " + e.what());
        }
    }

    std::vector<double> vmae, vrmse, tmae, trmse;
    for (const SingleRun& r : out.runs) {
        vmae.push_back(r.validation.mae);
        vrmse.push_back(r.validation.rmse);
        tmae.push_back(r.test.mae);
        trmse.push_back(r.test.rmse);
    }
    out.validation_median = {lower_median(vmae), lower_median(vrmse)};
    out.test_median = {lower_median(tmae), lower_median(trmse)};

    const double med = out.test_median.mae;
    for (int i = 0; i < repeats; ++i)
        if (out.runs[i].test.mae == med) {
            out.reported_repeat = i;
            break;
        }
    out.reported = out.runs[out.reported_repeat];
    return out;
}

}  // namespace flowcast
