// Command-line front end: batch experiments in, files out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowcast/flowcast.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct KeyValue {
    std::string key;
    std::string value;
};

KeyValue split_assignment(const std::string& s) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
        throw flowcast::ConfigError("override '" + s + "' is not key=value");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& inputs,
            const std::vector<std::string>& overrides, const std::string& output) {
    flowcast::RunConfig cfg;
    if (!config_path.empty()) cfg = flowcast::parse_config_file(config_path);
    for (const std::string& path : inputs) cfg.inputs.push_back(path);
    for (const std::string& o : overrides) {
        const KeyValue kv = split_assignment(o);
        flowcast::apply_config_entry(cfg, kv.key, kv.value);
    }
    if (!output.empty()) cfg.output = output;

    const flowcast::PipelineResult result = flowcast::run_pipeline(cfg);
    for (const std::string& f : result.files) std::cout << "wrote " << f << "\n";
    std::printf("validation mae=%.6g rmse=%.6g\n", result.report.evaluation.reported.validation.mae,
                result.report.evaluation.reported.validation.rmse);
    std::printf("test       mae=%.6g rmse=%.6g\n", result.report.evaluation.reported.test.mae,
                result.report.evaluation.reported.test.rmse);
    std::printf("persistence test mae=%.6g rmse=%.6g\n", result.report.persistence_test.mae,
                result.report.persistence_test.rmse);
    return kExitOk;
}

int cmd_automal(const std::vector<std::string>& inputs, bool header,
                flowcast::LagSelectionConfig lag_cfg) {
    std::vector<flowcast::Series> targets;
    for (const std::string& path : inputs) {
        flowcast::Dataset d = flowcast::load_csv(path, header);
        flowcast::Series target = d.target();
        if (target.has_missing()) target = flowcast::interpolate_missing(target);
        targets.push_back(std::move(target));
    }
    const flowcast::LagRecommendation rec = flowcast::recommend_lags(targets, lag_cfg);
    std::cout << rec.note << "\n";
    for (std::size_t i = 0; i < rec.per_sequence.size(); ++i) {
        const flowcast::SequenceEvidence& ev = rec.per_sequence[i];
        std::cout << "sequence " << i << " '" << ev.name << "': stationary="
                  << (ev.stationary ? "true" : "false") << " first_peak=";
        if (ev.first_peak_lag)
            std::cout << *ev.first_peak_lag;
        else
            std::cout << "none";
        std::cout << " lags=" << ev.chosen_lags
                  << " default_used=" << (ev.used_default ? "true" : "false") << "\n";
    }
    std::cout << "lags " << rec.lags << "\n";
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::vector<std::string>& inputs,
                bool header, const std::string& out_path) {
    const flowcast::ModelBundle bundle = flowcast::load_model(model_path);
    const flowcast::ModelSpec& spec = bundle.model.spec;
    const std::size_t z = static_cast<std::size_t>(spec.output_dim);
    const std::size_t m = static_cast<std::size_t>(spec.input_dim) / z;
    if (inputs.size() != z)
        throw flowcast::DataError("model expects " + std::to_string(z) + " parallel input file(s), got " +
                                  std::to_string(inputs.size()));

    std::vector<flowcast::Dataset> datasets;
    for (const std::string& path : inputs) {
        flowcast::Dataset d = flowcast::load_csv(path, header);
        if (d.m() < m)
            throw flowcast::DataError("input '" + path + "' has " + std::to_string(d.m()) +
                                      " columns, model expects " + std::to_string(m));
        d.features.resize(m);
        for (flowcast::Series& f : d.features)
            if (f.has_missing()) f = flowcast::interpolate_missing(f);
        datasets.push_back(std::move(d));
    }
    flowcast::ParallelDataset data = flowcast::assemble_parallel(std::move(datasets));

    flowcast::ParallelDataset normalized;
    for (std::size_t j = 0; j < z; ++j)
        normalized.members.push_back(bundle.normalizers[j].normalize(data.members[j]));
    const flowcast::SupervisedTensors tensors =
        flowcast::make_supervised(normalized, static_cast<std::size_t>(spec.nlags),
                                  static_cast<std::size_t>(spec.msteps));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw flowcast::DataError("cannot write '" + out_path + "'");
        out = &file;
    }
    (*out) << "time,member,step,truth,prediction\n";
    char buf[96];
    for (std::size_t r = 0; r < tensors.n_rows; ++r) {
        const flowcast::Matrix pred = bundle.model.predict_window(tensors.x.row(static_cast<int>(r)));
        for (std::size_t s = 0; s < tensors.msteps; ++s)
            for (std::size_t j = 0; j < z; ++j) {
                const std::size_t t = r + tensors.nlags + s;
                const double truth = data.members[j].target().values[t];
                const double value = bundle.normalizers[j].denormalize_value(
                    0, pred(static_cast<int>(s), static_cast<int>(j)));
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.17g,%.17g\n", t, j, s, truth, value);
                (*out) << buf;
            }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandwidth-style time-series forecasting with LSTM networks"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run the full pipeline from a config file and/or flags");
    std::string run_config, run_output;
    std::vector<std::string> run_inputs, run_overrides;
    run->add_option("config", run_config, "Config file (key = value lines)");
    run->add_option("--input,-i", run_inputs, "Input CSV path (repeatable; first column = target)");
    run->add_option("--set,-s", run_overrides, "Override a config key, e.g. -s nlags=auto");
    run->add_option("--output,-o", run_output, "Output directory");

    // automal
    auto* lag = app.add_subcommand("automal", "Recommend a lags value from the target sequences");
    std::vector<std::string> lag_inputs;
    bool lag_no_header = false, lag_no_log = false, lag_no_diff = false, lag_acf_tr = false;
    flowcast::LagSelectionConfig lag_cfg;
    unsigned long long lag_sens = 1, lag_default = 5, lag_maxlag = 0;
    lag->add_option("--input,-i", lag_inputs, "Input CSV path (repeatable)")->required();
    lag->add_flag("--no-header", lag_no_header, "Inputs have no header row");
    lag->add_option("--alpha", lag_cfg.alpha, "Stationarity significance level");
    lag->add_option("--sensitivity", lag_sens, "Peak detection window half-width");
    lag->add_option("--default-lags", lag_default, "Fallback lags value");
    lag->add_option("--max-acf-lag", lag_maxlag, "ACF lag cap (0 = half the length)");
    lag->add_flag("--no-log", lag_no_log, "Skip the log transform");
    lag->add_flag("--no-diff", lag_no_diff, "Skip differencing");
    lag->add_flag("--acf-on-transformed", lag_acf_tr, "Run the ACF on the transformed sequence");

    // predict
    auto* pred = app.add_subcommand("predict", "Predict over a CSV with a stored model");
    std::string pred_model, pred_out;
    std::vector<std::string> pred_inputs;
    bool pred_no_header = false;
    pred->add_option("model", pred_model, "Model file (.fcm)")->required();
    pred->add_option("--input,-i", pred_inputs, "Input CSV path (repeatable)")->required();
    pred->add_flag("--no-header", pred_no_header, "Inputs have no header row");
    pred->add_option("--output,-o", pred_out, "Write predictions here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_config, run_inputs, run_overrides, run_output);
        if (lag->parsed()) {
            lag_cfg.peak_sensitivity = static_cast<std::size_t>(lag_sens);
            lag_cfg.default_lags = static_cast<std::size_t>(lag_default);
            lag_cfg.max_acf_lag = static_cast<std::size_t>(lag_maxlag);
            lag_cfg.apply_log = !lag_no_log;
            lag_cfg.apply_diff = !lag_no_diff;
            lag_cfg.acf_on_transformed = lag_acf_tr;
            return cmd_automal(lag_inputs, !lag_no_header, lag_cfg);
        }
        if (pred->parsed()) return cmd_predict(pred_model, pred_inputs, !pred_no_header, pred_out);
    } catch (const flowcast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const flowcast::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
