#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowcast/config.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/pipeline.hpp"
#include "flowcast/rng.hpp"

using namespace flowcast;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = temp_path(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sine_csv(const std::string& name, int n = 120, double period = 12.0) {
    std::ostringstream os;
    os << "bw\n";
    char buf[40];
    for (int t = 0; t < n; ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g\n",
                      5.0 + 3.0 * std::sin(2.0 * M_PI * t / period) + 0.01 * t);
        os << buf;
    }
    return write_temp(name, os.str());
}

/// Small fast config for pipeline tests.
RunConfig tiny_config(const std::string& input, const std::string& out_dir) {
    RunConfig cfg;
    cfg.inputs = {input};
    cfg.hyper = HyperMode::Manual;
    cfg.nlayers = 1;
    cfg.units1 = 6;
    cfg.nepochs = 3;
    cfg.bs = 16;
    cfg.nlags = 4;
    cfg.output = out_dir;
    cfg.seed = 11;
    return cfg;
}

ModelBundle tiny_trained_bundle(std::uint64_t seed = 5) {
    ParallelDataset p;
    Dataset d;
    std::vector<double> v(80);
    for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = 2.0 + std::sin(2.0 * M_PI * static_cast<double>(t) / 10.0);
    d.features.emplace_back("y", std::move(v));
    p.members.push_back(std::move(d));

    ModelBundle bundle;
    bundle.normalizers.push_back(fit_normalizer(p.members[0], NormMethod::MinMax));
    ParallelDataset normalized;
    normalized.members.push_back(bundle.normalizers[0].normalize(p.members[0]));
    const SupervisedTensors t = make_supervised(normalized, 5, 2);

    ModelSpec spec;
    spec.nlayers = 1;
    spec.units = {5};
    spec.nlags = 5;
    spec.msteps = 2;
    spec.input_dim = 1;
    spec.output_dim = 1;
    TrainConfig tc;
    tc.epochs = 2;
    tc.batch_size = 8;
    tc.seed = seed;
    bundle.model = train(spec, t, tc);
    bundle.config_echo = "test = true\n";
    return bundle;
}

}  // namespace

TEST_CASE("parse_config_file: defaults, overrides, and rejection of unknown keys") {
    const std::string path = write_temp("fc_cfg.txt",
                                        "# comment\n"
                                        "nlags = 7\n"
                                        "norm = z-score\n"
                                        "hyper = manual\n");
    RunConfig cfg = parse_config_file(path);
    CHECK(cfg.nlags == 7);
    CHECK(cfg.norm == NormMethod::ZScore);
    CHECK(cfg.hyper == HyperMode::Manual);
    // Untouched keys keep the parameter-table defaults.
    CHECK(cfg.nfeatures == 1);
    CHECK(cfg.msteps == 1);
    CHECK(cfg.network == Variant::Vanilla);
    CHECK(cfg.act == Activation::Tanh);
    CHECK(cfg.optimizer == OptimizerKind::Adam);
    CHECK(cfg.split == 0.8);
    CHECK(cfg.valsplit == 0.2);
    CHECK(cfg.niter == 50);
    CHECK(cfg.units1 == 256);
    CHECK(cfg.units2 == 128);
    CHECK(cfg.lr == 0.001);
    CHECK(cfg.nepochs == 50);
    CHECK(cfg.bs == 8);
    CHECK(cfg.nlayers == 2);

    const RunConfig defaults;  // empty config = all defaults
    CHECK(defaults.nlags == 5);
    CHECK(defaults.hyper == HyperMode::Random);

    apply_config_entry(cfg, "nlags", "auto");
    CHECK(cfg.auto_lags);

    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "no_such_key", "1"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "split", "1.5"), doctest::Contains("(0,1)"),
                         ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "niter", "abc"), ConfigError);
    const std::string bad = write_temp("fc_bad_cfg.txt", "nlags 7\n");
    CHECK_THROWS_AS(parse_config_file(bad), ConfigError);
}

TEST_CASE("model file round-trip preserves predictions bit-exactly") {
    const ModelBundle bundle = tiny_trained_bundle();
    const std::string path = temp_path("fc_model.fcm");
    save_model(bundle, path);
    const ModelBundle loaded = load_model(path);

    CHECK(loaded.model.spec.nlags == bundle.model.spec.nlags);
    CHECK(loaded.model.history.size() == bundle.model.history.size());
    CHECK(loaded.config_echo == bundle.config_echo);
    CHECK(loaded.normalizers.size() == 1);
    CHECK(loaded.normalizers[0].method() == NormMethod::MinMax);

    Rng rng(88);
    for (int rep = 0; rep < 100; ++rep) {
        Matrix window(bundle.model.spec.nlags, 1);
        for (double& v : window.d) v = rng.uniform();
        const Matrix a = bundle.model.predict_window(window.d.data());
        const Matrix b = loaded.model.predict_window(window.d.data());
        CHECK(a.d == b.d);
    }
}

TEST_CASE("model file detects corruption, version skew, and truncation") {
    const ModelBundle bundle = tiny_trained_bundle();
    const std::string path = temp_path("fc_model_corrupt.fcm");
    save_model(bundle, path);

    std::string bytes = read_file(path);
    // Flip a payload byte (past the 20-byte header).
    std::string corrupted = bytes;
    corrupted[40] = static_cast<char>(corrupted[40] ^ 0x5A);
    const std::string cpath = write_temp("fc_corrupt.fcm", corrupted);
    CHECK_THROWS_WITH_AS(load_model(cpath), doctest::Contains("checksum"), DataError);

    std::string future = bytes;
    future[8] = 99;  // version field
    const std::string vpath = write_temp("fc_future.fcm", future);
    CHECK_THROWS_WITH_AS(load_model(vpath), doctest::Contains("version"), DataError);

    const std::string tpath = write_temp("fc_trunc.fcm", bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(load_model(tpath), DataError);

    const std::string npath = write_temp("fc_notmodel.fcm", "definitely not a model file");
    CHECK_THROWS_AS(load_model(npath), DataError);
}

TEST_CASE("run_pipeline completes on a small series and beats nothing silently") {
    const std::string input = sine_csv("fc_pipe.csv");
    const std::string out_dir = temp_path("fc_pipe_out");
    std::filesystem::remove_all(out_dir);
    RunConfig cfg = tiny_config(input, out_dir);

    const PipelineResult result = run_pipeline(cfg);
    CHECK(std::filesystem::exists(out_dir + "/metrics.txt"));
    CHECK(std::filesystem::exists(out_dir + "/predictions.csv"));
    CHECK(std::filesystem::exists(out_dir + "/timings.txt"));
    CHECK(std::filesystem::exists(out_dir + "/model.fcm"));
    CHECK_FALSE(std::filesystem::exists(out_dir + "/trials.txt"));  // manual mode

    const SingleRun& run = result.report.evaluation.reported;
    // Forecast-count law: validation rows and test region length - msteps + 1.
    const std::size_t n = 120, n_tr = 96;
    const std::size_t n_rows = n_tr - (4 + 1 - 1);
    const std::size_t n_val = static_cast<std::size_t>(std::floor(n_rows * 0.2));
    CHECK(static_cast<std::size_t>(run.val_predictions.rows) == n_val);
    CHECK(static_cast<std::size_t>(run.test_predictions.rows) == (n - n_tr));

    // Reported metrics re-score from the emitted predictions.
    const std::string pred_text = read_file(out_dir + "/predictions.csv");
    std::vector<double> truth_v, pred_v, truth_t, pred_t;
    std::istringstream lines(pred_text);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        std::stringstream ss(line);
        std::string time, member, truth, pred, split;
        std::getline(ss, time, ',');
        std::getline(ss, member, ',');
        std::getline(ss, truth, ',');
        std::getline(ss, pred, ',');
        std::getline(ss, split, ',');
        if (split == "validation") {
            truth_v.push_back(std::stod(truth));
            pred_v.push_back(std::stod(pred));
        } else {
            truth_t.push_back(std::stod(truth));
            pred_t.push_back(std::stod(pred));
        }
    }
    CHECK(std::fabs(mae(truth_v, pred_v) - run.validation.mae) < 1e-9);
    CHECK(std::fabs(rmse(truth_t, pred_t) - run.test.rmse) < 1e-9);
}

TEST_CASE("run_pipeline is byte-deterministic for fixed config and seed") {
    const std::string input = sine_csv("fc_det.csv");
    const std::string out_a = temp_path("fc_det_a");
    const std::string out_b = temp_path("fc_det_b");
    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);

    RunConfig cfg = tiny_config(input, out_a);
    cfg.repeats = 2;
    run_pipeline(cfg);
    cfg.output = out_b;
    run_pipeline(cfg);

    CHECK(read_file(out_a + "/metrics.txt") == read_file(out_b + "/metrics.txt"));
    CHECK(read_file(out_a + "/predictions.csv") == read_file(out_b + "/predictions.csv"));
    CHECK(read_file(out_a + "/model.fcm") == read_file(out_b + "/model.fcm"));
}

TEST_CASE("run_pipeline with random search emits a trial log") {
    const std::string input = sine_csv("fc_rs.csv", 80, 10.0);
    const std::string out_dir = temp_path("fc_rs_out");
    std::filesystem::remove_all(out_dir);
    RunConfig cfg = tiny_config(input, out_dir);
    cfg.hyper = HyperMode::Random;
    cfg.niter = 3;
    // Narrow ranges keep the three trials cheap.
    cfg.search_space.dims = {
        {"nlayers", ParamKind::Integer, ParamScale::Linear, 1, 2, 0},
        {"units1", ParamKind::Integer, ParamScale::Linear, 2, 6, 0},
        {"units2", ParamKind::Integer, ParamScale::Linear, 2, 6, 2},
        {"lr", ParamKind::Continuous, ParamScale::Log10, 1e-3, 1e-2, 0},
        {"nepochs", ParamKind::Integer, ParamScale::Linear, 2, 4, 0},
        {"bs", ParamKind::Integer, ParamScale::Linear, 8, 16, 0},
    };

    const PipelineResult result = run_pipeline(cfg);
    CHECK(result.report.searched);
    CHECK(std::filesystem::exists(out_dir + "/trials.txt"));
    CHECK(result.report.trials.trials.size() == 3);
    CHECK(select_best(result.report.trials).index == result.report.trials.best_index);
}

TEST_CASE("run_pipeline supports parallel datasets (z=2) and auto lags") {
    const std::string a = sine_csv("fc_par_a.csv", 160, 8.0);
    const std::string b = sine_csv("fc_par_b.csv", 160, 8.0);
    const std::string out_dir = temp_path("fc_par_out");
    std::filesystem::remove_all(out_dir);
    RunConfig cfg = tiny_config(a, out_dir);
    cfg.inputs = {a, b};
    cfg.auto_lags = true;

    const PipelineResult result = run_pipeline(cfg);
    CHECK(result.report.z == 2);
    CHECK(result.report.lags_auto);
    CHECK(result.report.nlags == result.report.lag_recommendation.lags);
    CHECK(result.report.lag_recommendation.per_sequence.size() == 2);
    CHECK(result.bundle.normalizers.size() == 2);
    // Period-8 sines: the recommendation should land on the period.
    CHECK(result.report.lag_recommendation.lags >= 7);
    CHECK(result.report.lag_recommendation.lags <= 9);
}

TEST_CASE("run_pipeline: training-region normalizer fit differs from the default full fit") {
    const std::string input = sine_csv("fc_fit.csv", 140, 10.0);
    RunConfig cfg = tiny_config(input, temp_path("fc_fit_a"));
    const PipelineResult full = run_pipeline(cfg);
    cfg.output = temp_path("fc_fit_b");
    cfg.fit_norm_on_train = true;
    const PipelineResult train_only = run_pipeline(cfg);
    // The series has an upward drift, so the train-region max is smaller.
    const double full_span = full.bundle.normalizers[0].feature_params(0).b;
    const double train_span = train_only.bundle.normalizers[0].feature_params(0).b;
    CHECK(train_span < full_span);
}

TEST_CASE("run_pipeline: multi-step run records per-step errors") {
    const std::string input = sine_csv("fc_msteps.csv", 140, 10.0);
    const std::string out_dir = temp_path("fc_msteps_out");
    std::filesystem::remove_all(out_dir);
    RunConfig cfg = tiny_config(input, out_dir);
    cfg.msteps = 3;
    const PipelineResult result = run_pipeline(cfg);
    REQUIRE(result.report.test_per_step.size() == 3);
    for (const SplitMetrics& s : result.report.test_per_step) CHECK(s.rmse >= s.mae);
    const std::string metrics = read_file(out_dir + "/metrics.txt");
    CHECK(metrics.find("test_step3_mae") != std::string::npos);
    // msteps=3 trims the forecast count: region_len - msteps + 1.
    CHECK(result.report.evaluation.reported.test_predictions.rows == 140 - 112 - 3 + 1);
}

TEST_CASE("run_pipeline interpolates missing cells before analysis") {
    std::ostringstream os;
    os << "bw\n";
    for (int t = 0; t < 120; ++t) {
        if (t == 17 || t == 55) {
            os << "NA\n";  // single-column files mark gaps explicitly
        } else {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g\n", 5.0 + 3.0 * std::sin(2.0 * M_PI * t / 12.0));
            os << buf;
        }
    }
    const std::string input = write_temp("fc_gaps.csv", os.str());
    const std::string out_dir = temp_path("fc_gaps_out");
    std::filesystem::remove_all(out_dir);
    const PipelineResult result = run_pipeline(tiny_config(input, out_dir));
    CHECK(std::isfinite(result.report.evaluation.reported.test.mae));
}

TEST_CASE("load_model rejects non-finite parameters") {
    ModelBundle bundle = tiny_trained_bundle(21);
    bundle.model.params.head_w.d[0] = missing_value();
    const std::string path = temp_path("fc_nan.fcm");
    save_model(bundle, path);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("non-finite"), DataError);
}

TEST_CASE("run_pipeline propagates stage errors with context") {
    RunConfig cfg;
    cfg.inputs = {"/nonexistent/missing.csv"};
    CHECK_THROWS_AS(run_pipeline(cfg), DataError);

    const std::string input = sine_csv("fc_err.csv", 30, 6.0);
    RunConfig small = tiny_config(input, temp_path("fc_err_out"));
    small.nlags = 40;  // longer than the training split
    CHECK_THROWS_AS(run_pipeline(small), DataError);
}
