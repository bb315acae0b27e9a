#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/evaluation.hpp"
#include "flowcast/lag_select.hpp"
#include "flowcast/trial_log.hpp"

namespace flowcast {

/// Everything run_pipeline learned about one experiment.
struct EvaluationReport {
    std::string config_echo;
    std::vector<std::string> inputs;
    LagRecommendation lag_recommendation;  // meaningful when lags_auto
    bool lags_auto = false;
    std::size_t nlags = 0;
    std::size_t msteps = 1;
    std::size_t z = 1;

    RepeatedEvaluation evaluation;
    SplitMetrics persistence_validation;
    SplitMetrics persistence_test;
    std::vector<SplitMetrics> test_per_step;  // per forecast step, original units

    /// Ground truth aligned with the reported predictions.
    Matrix val_truth;   // [count_val x z]
    Matrix test_truth;  // [count_test x z]

    PhaseTimers timers;
    TrialLog trials;    // empty in manual mode
    bool searched = false;
};

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw DataError("report: cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("report: write failed for '" + path + "'");
}

}  // namespace detail

/// Writes the report files into `out_dir`:
///   metrics.txt      deterministic summary (key = value lines)
///   predictions.csv  time index, member, truth, prediction, split
///   trials.txt       search log (only when a search ran)
///   timings.txt      wall-clock phase seconds (excluded from the
///                    byte-determinism contract, hence a separate file)
/// Field order is fixed so identical runs emit identical bytes.
inline std::vector<std::string> emit_report(const EvaluationReport& report,
                                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw DataError("report: cannot create output directory '" + out_dir + "'");

    std::vector<std::string> written;

    std::string m;
    m += "# run summary\n";
    for (std::size_t i = 0; i < report.inputs.size(); ++i)
        m += "input" + std::to_string(i) + " = " + report.inputs[i] + "\n";
    m += report.config_echo;
    if (report.lags_auto) {
        m += "lag_note = " + report.lag_recommendation.note + "\n";
        m += "lag_used_default = " +
             std::string(report.lag_recommendation.used_default ? "true" : "false") + "\n";
    }
    m += "resolved_nlags = " + std::to_string(report.nlags) + "\n";
    m += "repeats = " + std::to_string(report.evaluation.repeats) + "\n";
    m += "aggregation = " + report.evaluation.aggregation + "\n";
    m += "reported_repeat = " + std::to_string(report.evaluation.reported_repeat) + "\n";

    m += "# aggregate metrics (median over repeats, original units)\n";
    m += "aggregate_validation_mae = " + detail::g17(report.evaluation.validation_median.mae) + "\n";
    m += "aggregate_validation_rmse = " + detail::g17(report.evaluation.validation_median.rmse) + "\n";
    m += "aggregate_test_mae = " + detail::g17(report.evaluation.test_median.mae) + "\n";
    m += "aggregate_test_rmse = " + detail::g17(report.evaluation.test_median.rmse) + "\n";

    m += "# reported run (the repeat whose test MAE is the median; its predictions are emitted)\n";
    m += "validation_mae = " + detail::g17(report.evaluation.reported.validation.mae) + "\n";
    m += "validation_rmse = " + detail::g17(report.evaluation.reported.validation.rmse) + "\n";
    m += "test_mae = " + detail::g17(report.evaluation.reported.test.mae) + "\n";
    m += "test_rmse = " + detail::g17(report.evaluation.reported.test.rmse) + "\n";

    m += "# persistence baseline\n";
    m += "persistence_validation_mae = " + detail::g17(report.persistence_validation.mae) + "\n";
    m += "persistence_validation_rmse = " + detail::g17(report.persistence_validation.rmse) + "\n";
    m += "persistence_test_mae = " + detail::g17(report.persistence_test.mae) + "\n";
    m += "persistence_test_rmse = " + detail::g17(report.persistence_test.rmse) + "\n";

    if (report.msteps > 1) {
        m += "# per-step test errors\n";
        for (std::size_t s = 0; s < report.test_per_step.size(); ++s) {
            m += "test_step" + std::to_string(s + 1) +
                 "_mae = " + detail::g17(report.test_per_step[s].mae) + "\n";
            m += "test_step" + std::to_string(s + 1) +
                 "_rmse = " + detail::g17(report.test_per_step[s].rmse) + "\n";
        }
    }

    const std::string metrics_path = out_dir + "/metrics.txt";
    detail::write_text(metrics_path, m);
    written.push_back(metrics_path);

    std::string p = "time,member,truth,prediction,split\n";
    const SingleRun& run = report.evaluation.reported;
    for (int r = 0; r < run.val_predictions.rows; ++r)
        for (int j = 0; j < run.val_predictions.cols; ++j)
            p += std::to_string(run.val_begin + r) + "," + std::to_string(j) + "," +
                 detail::g17(report.val_truth(r, j)) + "," +
                 detail::g17(run.val_predictions(r, j)) + ",validation\n";
    for (int r = 0; r < run.test_predictions.rows; ++r)
        for (int j = 0; j < run.test_predictions.cols; ++j)
            p += std::to_string(run.test_begin + r) + "," + std::to_string(j) + "," +
                 detail::g17(report.test_truth(r, j)) + "," +
                 detail::g17(run.test_predictions(r, j)) + ",test\n";
    const std::string pred_path = out_dir + "/predictions.csv";
    detail::write_text(pred_path, p);
    written.push_back(pred_path);

    if (report.searched) {
        const std::string trials_path = out_dir + "/trials.txt";
        detail::write_text(trials_path, report.trials.serialize());
        written.push_back(trials_path);
    }

    std::string t = "# wall-clock seconds per phase\n";
    for (const auto& [name, secs] : report.timers.phases()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s = %.3f\n", name.c_str(), secs);
        t += buf;
    }
    const std::string timings_path = out_dir + "/timings.txt";
    detail::write_text(timings_path, t);
    written.push_back(timings_path);

    return written;
}

}  // namespace flowcast
