#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowcast/acf.hpp"
#include "flowcast/adf.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/transforms.hpp"

namespace flowcast {

struct LagSelectionConfig {
    double alpha = 0.05;             // significance level for the stationarity test
    std::size_t peak_sensitivity = 1;
    std::size_t default_lags = 5;    // fallback when a sequence gives no evidence
    std::size_t max_acf_lag = 0;     // 0 -> floor(n/2)
    bool apply_log = true;
    bool apply_diff = true;
    bool acf_on_transformed = false; // periodicity is read off the raw signal by default

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("lag selection: alpha must be in (0,1)");
        if (peak_sensitivity < 1) throw ConfigError("lag selection: peak_sensitivity must be >= 1");
        if (default_lags < 1) throw ConfigError("lag selection: default_lags must be >= 1");
    }
};

struct SequenceEvidence {
    std::string name;
    bool stationary = false;
    bool log_skipped_negative = false;
    std::optional<std::size_t> first_peak_lag;  // in lags of the analyzed signal
    std::size_t chosen_lags = 0;
    bool used_default = false;
};

struct LagRecommendation {
    std::size_t lags = 0;
    std::vector<SequenceEvidence> per_sequence;
    bool used_default = false;  // true iff every sequence fell back
    std::string note;           // always carries the "recommendation" tag
};

/// Most frequent value; ties resolve to the smallest tied value.
inline std::size_t majority_vote(const std::vector<std::size_t>& values) {
    if (values.empty()) throw DataError("majority_vote: empty input");
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t v : values) ++counts[v];
    std::size_t best = values[0];
    std::size_t best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {  // map iterates ascending, so ties keep the smaller value
            best = value;
            best_count = count;
        }
    }
    return best;
}

/// Lag recommendation over one or more target sequences. Per sequence: make
/// the signal stationarity-testable (log scale, first difference), run the
/// Dickey-Fuller test, and if it passes read the first autocorrelation peak
/// as the lag; otherwise fall back to the configured default. Multiple
/// sequences are reconciled by majority vote.
inline LagRecommendation recommend_lags(const std::vector<Series>& targets,
                                        const LagSelectionConfig& config = {}) {
    config.validate();
    if (targets.empty()) throw DataError("recommend_lags: empty target collection");

    LagRecommendation rec;
    std::vector<std::size_t> votes;

    for (const Series& target : targets) {
        SequenceEvidence ev;
        ev.name = target.name;

        Series working = target;
        if (config.apply_log) {
            LogTransformResult lt = log_transform(working);
            ev.log_skipped_negative = lt.skipped_negative;
            working = std::move(lt.series);
        }
        if (config.apply_diff) working = difference(working, 1);

        try {
            ev.stationary = adf_test(working, config.alpha).is_stationary;
        } catch (const DataError&) {
            ev.stationary = false;  // untestable sequences take the fallback path
        }

        if (ev.stationary) {
            const Series& acf_input = config.acf_on_transformed ? working : target;
            std::size_t max_lag = config.max_acf_lag != 0 ? config.max_acf_lag
                                                          : acf_input.size() / 2;
            max_lag = std::min(max_lag, acf_input.size() - 1);
            const AcfResult auto_corr = acf(acf_input, max_lag);
            // Peaks are searched over r_1..r_max; slice index j maps to lag j+1.
            const std::vector<double> tail(auto_corr.coefficients.begin() + 1,
                                           auto_corr.coefficients.end());
            const std::vector<std::size_t> peaks = find_peaks(tail, config.peak_sensitivity);
            if (!peaks.empty()) ev.first_peak_lag = peaks.front() + 1;
        }

        if (ev.first_peak_lag) {
            ev.chosen_lags = *ev.first_peak_lag;
        } else {
            ev.chosen_lags = config.default_lags;
            ev.used_default = true;
        }
        votes.push_back(ev.chosen_lags);
        rec.per_sequence.push_back(std::move(ev));
    }

    rec.lags = majority_vote(votes);
    rec.used_default = std::all_of(rec.per_sequence.begin(), rec.per_sequence.end(),
                                   [](const SequenceEvidence& e) { return e.used_default; });
    rec.note = "recommendation: lags=" + std::to_string(rec.lags) + " (majority vote over " +
               std::to_string(rec.per_sequence.size()) + " sequence(s)" +
               (rec.used_default ? "; default fallback" : "") + ")";
    return rec;
}

}  // namespace flowcast
