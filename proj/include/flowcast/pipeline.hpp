#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "flowcast/bayes_opt.hpp"
#include "flowcast/config.hpp"
#include "flowcast/csv.hpp"
#include "flowcast/evaluation.hpp"
#include "flowcast/lag_select.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/normalize.hpp"
#include "flowcast/random_search.hpp"
#include "flowcast/report.hpp"
#include "flowcast/train.hpp"
#include "flowcast/walk_forward.hpp"
#include "flowcast/window.hpp"

namespace flowcast {

struct PipelineResult {
    EvaluationReport report;
    ModelBundle bundle;               // reported model + normalizers
    std::vector<std::string> files;   // emitted paths (model file last)
};

namespace detail {

inline ModelSpec spec_from_point(const RunConfig& cfg, const HyperPoint& point, int input_dim,
                                 int output_dim) {
    ModelSpec spec;
    spec.variant = cfg.network;
    spec.nlayers = static_cast<int>(point.get_or("nlayers", cfg.nlayers));
    spec.units.clear();
    const double defaults[3] = {static_cast<double>(cfg.units1), static_cast<double>(cfg.units2),
                                static_cast<double>(cfg.units3)};
    for (int l = 0; l < spec.nlayers; ++l)
        spec.units.push_back(
            static_cast<int>(point.get_or("units" + std::to_string(l + 1), defaults[l])));
    spec.activation = cfg.act;
    spec.nlags = cfg.nlags;
    spec.msteps = cfg.msteps;
    spec.input_dim = input_dim;
    spec.output_dim = output_dim;
    spec.decoder_units = cfg.decoder_units;
    return spec;
}

inline TrainConfig train_config_from_point(const RunConfig& cfg, const HyperPoint& point,
                                           std::uint64_t seed) {
    TrainConfig tc;
    tc.epochs = static_cast<int>(point.get_or("nepochs", cfg.nepochs));
    tc.batch_size = static_cast<int>(point.get_or("bs", cfg.bs));
    tc.learning_rate = point.get_or("lr", cfg.lr);
    tc.optimizer = cfg.optimizer;
    tc.validation_split = cfg.valsplit;
    tc.loss = cfg.loss;
    tc.seed = seed;
    return tc;
}

inline HyperPoint manual_point(const RunConfig& cfg) {
    HyperPoint p;
    p.values.emplace_back("nlayers", cfg.nlayers);
    p.values.emplace_back("units1", cfg.units1);
    if (cfg.nlayers >= 2) p.values.emplace_back("units2", cfg.units2);
    if (cfg.nlayers >= 3) p.values.emplace_back("units3", cfg.units3);
    p.values.emplace_back("lr", cfg.lr);
    p.values.emplace_back("nepochs", cfg.nepochs);
    p.values.emplace_back("bs", cfg.bs);
    return p;
}

/// Denormalized one-shot metrics on the validation tail of the training rows
/// (the score hyperparameter selection minimizes).
inline ObjectiveResult validation_score(const ForecastModel& model, const SupervisedTensors& t,
                                        const std::vector<Normalizer>& normalizers,
                                        double valsplit) {
    const int n_rows = t.x.rows;
    const int n_val = static_cast<int>(std::floor(n_rows * valsplit));
    const int n_fit = n_rows - n_val;
    std::vector<double> truth, pred;
    truth.reserve(static_cast<std::size_t>(n_val) * t.msteps * t.z);
    pred.reserve(truth.capacity());
    for (int r = n_fit; r < n_rows; ++r) {
        const Matrix p = model.predict_window(t.x.row(r));
        for (std::size_t s = 0; s < t.msteps; ++s)
            for (std::size_t j = 0; j < t.z; ++j) {
                pred.push_back(normalizers[j].denormalize_value(
                    0, p(static_cast<int>(s), static_cast<int>(j))));
                truth.push_back(normalizers[j].denormalize_value(0, t.y3(r, s, j)));
            }
    }
    return {mae(truth, pred), rmse(truth, pred)};
}

/// Pooled persistence metrics over [begin, end) across all member targets,
/// original units.
inline SplitMetrics persistence_metrics(const ParallelDataset& data, std::size_t begin,
                                        std::size_t end) {
    std::vector<double> truth, pred;
    for (const Dataset& member : data.members) {
        const std::vector<double> p = persistence_forecast(member.target(), begin, end);
        for (std::size_t t = begin; t < end; ++t) {
            truth.push_back(member.target().values[t]);
            pred.push_back(p[t - begin]);
        }
    }
    return {mae(truth, pred), rmse(truth, pred)};
}

inline Matrix truth_matrix(const ParallelDataset& data, std::size_t begin, std::size_t count) {
    Matrix out(static_cast<int>(count), static_cast<int>(data.z()));
    for (std::size_t j = 0; j < data.z(); ++j)
        for (std::size_t k = 0; k < count; ++k)
            out(static_cast<int>(k), static_cast<int>(j)) =
                data.members[j].target().values[begin + k];
    return out;
}

}  // namespace detail

/// End-to-end experiment: load -> (lag recommendation) -> normalize -> split
/// -> window -> (hyperparameter search) -> repeated train/evaluate -> emit.
/// Returns the report and writes metrics/predictions/trials/timings plus the
/// model file into the configured output directory.
inline PipelineResult run_pipeline(const RunConfig& config) {
    RunConfig cfg = config;  // local copy; auto lags resolve into cfg.nlags
    cfg.validate();

    PipelineResult result;
    EvaluationReport& report = result.report;
    PhaseTimers& timers = report.timers;

    timers.start("preprocess");

    // Load, trim to the requested feature count, close gaps.
    std::vector<Dataset> datasets;
    for (const std::string& path : cfg.inputs) {
        Dataset d = load_csv(path, cfg.has_header);
        if (d.m() < static_cast<std::size_t>(cfg.nfeatures))
            throw DataError("input '" + path + "' has " + std::to_string(d.m()) +
                            " columns, nfeatures=" + std::to_string(cfg.nfeatures));
        d.features.resize(cfg.nfeatures);
        for (Series& f : d.features)
            if (f.has_missing()) f = interpolate_missing(f);
        datasets.push_back(std::move(d));
    }
    ParallelDataset data = assemble_parallel(std::move(datasets));
    const std::size_t n = data.n(), m = data.m(), z = data.z();

    if (cfg.auto_lags) {
        std::vector<Series> targets;
        for (const Dataset& member : data.members) targets.push_back(member.target());
        report.lag_recommendation = recommend_lags(targets, cfg.lag_config);
        report.lags_auto = true;
        cfg.nlags = static_cast<int>(report.lag_recommendation.lags);
    }
    report.nlags = static_cast<std::size_t>(cfg.nlags);
    report.msteps = static_cast<std::size_t>(cfg.msteps);
    report.z = z;
    report.config_echo = cfg.echo();
    report.inputs = cfg.inputs;

    const std::size_t n_tr = static_cast<std::size_t>(static_cast<double>(n) * cfg.split);

    // Normalizers per member; fit on the full series by default, training
    // region only when leakage avoidance is requested.
    std::vector<Normalizer> normalizers;
    for (const Dataset& member : data.members) {
        if (cfg.fit_norm_on_train) {
            auto [tr, te] = train_test_split(member, cfg.split);
            normalizers.push_back(fit_normalizer(tr, cfg.norm));
        } else {
            normalizers.push_back(fit_normalizer(member, cfg.norm));
        }
    }
    ParallelDataset normalized;
    for (std::size_t j = 0; j < z; ++j)
        normalized.members.push_back(normalizers[j].normalize(data.members[j]));

    auto [norm_train, norm_test] = train_test_split(normalized, cfg.split);
    const SupervisedTensors tensors =
        make_supervised(norm_train, static_cast<std::size_t>(cfg.nlags),
                        static_cast<std::size_t>(cfg.msteps));
    timers.stop();

    const int input_dim = static_cast<int>(m * z);
    const int output_dim = static_cast<int>(z);

    const Objective objective = [&](const HyperPoint& point, std::uint64_t seed) {
        const ModelSpec spec = detail::spec_from_point(cfg, point, input_dim, output_dim);
        const TrainConfig tc = detail::train_config_from_point(cfg, point, seed);
        const ForecastModel model = train(spec, tensors, tc);
        return detail::validation_score(model, tensors, normalizers, cfg.valsplit);
    };

    timers.start("train");
    HyperPoint chosen = detail::manual_point(cfg);
    if (cfg.hyper != HyperMode::Manual) {
        report.trials = cfg.hyper == HyperMode::Random
                            ? random_search(objective, cfg.search_space, cfg.niter, cfg.seed)
                            : bayesian_opt(objective, cfg.search_space, cfg.niter, cfg.seed);
        report.searched = true;
        chosen = select_best(report.trials).point;
    }
    timers.stop();

    // Walk-forward regions. Validation forecasts target the same rows train()
    // holds out; the test region is everything past the split point.
    const std::size_t n_rows = tensors.n_rows;
    const std::size_t n_val = static_cast<std::size_t>(
        std::floor(static_cast<double>(n_rows) * cfg.valsplit));
    const std::size_t val_begin = static_cast<std::size_t>(cfg.nlags) + (n_rows - n_val);
    const std::size_t test_begin = n_tr;

    std::vector<ForecastModel> repeat_models;
    const auto run_once = [&](std::uint64_t seed) {
        const ModelSpec spec = detail::spec_from_point(cfg, chosen, input_dim, output_dim);
        timers.start("train");
        TrainConfig tc = detail::train_config_from_point(cfg, chosen, seed);
        ForecastModel model = train(spec, tensors, tc);
        timers.stop();

        timers.start("evaluate");
        SingleRun run;
        const WalkForwardResult val_wf =
            walk_forward_model(model, normalizers, data, val_begin, n_tr, cfg.walk_mode);
        const WalkForwardResult test_wf =
            walk_forward_model(model, normalizers, data, test_begin, n, cfg.walk_mode);
        run.val_begin = val_begin;
        run.test_begin = test_begin;
        run.val_predictions = val_wf.first_step;
        run.test_predictions = test_wf.first_step;
        run.test_all_steps = test_wf.all_steps;

        const Matrix val_truth = detail::truth_matrix(data, val_begin,
                                                      static_cast<std::size_t>(val_wf.first_step.rows));
        const Matrix test_truth = detail::truth_matrix(data, test_begin,
                                                       static_cast<std::size_t>(test_wf.first_step.rows));
        run.validation = {mae(val_truth.d, run.val_predictions.d),
                          rmse(val_truth.d, run.val_predictions.d)};
        run.test = {mae(test_truth.d, run.test_predictions.d),
                    rmse(test_truth.d, run.test_predictions.d)};
        timers.stop();

        repeat_models.push_back(std::move(model));
        return run;
    };

    report.evaluation = repeated_evaluation(run_once, cfg.repeats, cfg.seed);

    timers.start("evaluate");
    report.persistence_validation =
        detail::persistence_metrics(data, val_begin,
                                    val_begin + static_cast<std::size_t>(
                                                    report.evaluation.reported.val_predictions.rows));
    report.persistence_test = detail::persistence_metrics(
        data, test_begin,
        test_begin + static_cast<std::size_t>(report.evaluation.reported.test_predictions.rows));

    report.val_truth = detail::truth_matrix(
        data, val_begin, static_cast<std::size_t>(report.evaluation.reported.val_predictions.rows));
    report.test_truth = detail::truth_matrix(
        data, test_begin, static_cast<std::size_t>(report.evaluation.reported.test_predictions.rows));

    // Per-step test errors of the reported run.
    report.test_per_step.clear();
    const Matrix& all = report.evaluation.reported.test_all_steps;
    for (std::size_t s = 0; s < report.msteps; ++s) {
        std::vector<double> truth, pred;
        for (int k = 0; k < all.rows; ++k)
            for (std::size_t j = 0; j < z; ++j) {
                truth.push_back(
                    data.members[j].target().values[test_begin + static_cast<std::size_t>(k) + s]);
                pred.push_back(all(k, static_cast<int>(s * z + j)));
            }
        report.test_per_step.push_back({mae(truth, pred), rmse(truth, pred)});
    }
    timers.stop();

    result.bundle.model = std::move(repeat_models[static_cast<std::size_t>(
        report.evaluation.reported_repeat)]);
    result.bundle.normalizers = normalizers;
    result.bundle.config_echo = report.config_echo;

    result.files = emit_report(report, cfg.resolved_output());
    const std::string model_path = cfg.resolved_output() + "/model.fcm";
    save_model(result.bundle, model_path);
    result.files.push_back(model_path);
    return result;
}

}  // namespace flowcast
