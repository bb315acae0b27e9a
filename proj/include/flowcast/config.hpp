#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flowcast/activations.hpp"
#include "flowcast/csv.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/lag_select.hpp"
#include "flowcast/loss.hpp"
#include "flowcast/model.hpp"
#include "flowcast/normalize.hpp"
#include "flowcast/optimizer.hpp"
#include "flowcast/search_space.hpp"
#include "flowcast/walk_forward.hpp"

namespace flowcast {

enum class HyperMode { Manual, Random, Bayesian };

inline const char* to_string(HyperMode m) {
    switch (m) {
        case HyperMode::Manual: return "manual";
        case HyperMode::Random: return "random";
        case HyperMode::Bayesian: return "bayesian";
    }
    return "?";
}

inline HyperMode hyper_mode_from_string(const std::string& s) {
    if (s == "manual" || s == "ms") return HyperMode::Manual;
    if (s == "random" || s == "rs") return HyperMode::Random;
    if (s == "bayesian" || s == "boa") return HyperMode::Bayesian;
    throw ConfigError("unknown hyper mode '" + s + "' (choose manual, random, bayesian)");
}

/// Fully resolved run configuration. Defaults follow the engine's parameter
/// table: nfeatures=1, nlags=5, msteps=1, norm=min-max, network=vanilla,
/// act=tanh, optimizer=adam, split=0.8, valsplit=0.2, hyper=random, niter=50.
/// The manual hyperparameter point defaults to the baseline configuration
/// (units 256/128, two layers, lr=0.001, 50 epochs, batch size 8).
struct RunConfig {
    std::vector<std::string> inputs;
    bool has_header = true;

    int nfeatures = 1;
    int nlags = 5;
    bool auto_lags = false;  // nlags = "auto"
    int msteps = 1;
    NormMethod norm = NormMethod::MinMax;
    Variant network = Variant::Vanilla;
    Activation act = Activation::Tanh;
    OptimizerKind optimizer = OptimizerKind::Adam;
    LossKind loss = LossKind::Mse;
    double split = 0.8;
    double valsplit = 0.2;
    HyperMode hyper = HyperMode::Random;
    int niter = 50;
    int repeats = 1;
    std::uint64_t seed = 1;
    std::string output;  // empty -> $FLOWCAST_OUTPUT_DIR or ./out
    bool fit_norm_on_train = false;
    WalkMode walk_mode = WalkMode::Recursive;

    // Manual hyperparameter point (also the fallback model shape).
    int nlayers = 2;
    int units1 = 256;
    int units2 = 128;
    int units3 = 0;
    double lr = 0.001;
    int nepochs = 50;
    int bs = 8;
    int decoder_units = 0;  // 0 -> last encoder layer

    // Lag-recommendation knobs (used when nlags = auto).
    LagSelectionConfig lag_config;

    // Admissible search ranges. Not a config-file key: callers embedding the
    // library may narrow it, the CLI always searches the standard table.
    SearchSpace search_space = SearchSpace::defaults();

    std::string resolved_output() const {
        if (!output.empty()) return output;
        if (const char* env = std::getenv("FLOWCAST_OUTPUT_DIR")) return env;
        return "out";
    }

    void validate() const {
        if (inputs.empty()) throw ConfigError("config: at least one input CSV is required");
        if (nfeatures < 1) throw ConfigError("config: nfeatures must be >= 1");
        if (!auto_lags && nlags < 1) throw ConfigError("config: nlags must be >= 1 or 'auto'");
        if (msteps < 1) throw ConfigError("config: msteps must be >= 1");
        if (!(split > 0.0 && split < 1.0)) throw ConfigError("config: split must be in (0,1)");
        if (!(valsplit > 0.0 && valsplit < 1.0))
            throw ConfigError("config: valsplit must be in (0,1)");
        if (niter < 1) throw ConfigError("config: niter must be >= 1");
        if (repeats < 1) throw ConfigError("config: repeats must be >= 1");
        if (nlayers < 1 || nlayers > 3) throw ConfigError("config: nlayers must be in [1,3]");
        if (units1 < 1) throw ConfigError("config: units1 must be >= 1");
        if (nlayers >= 2 && units2 < 1) throw ConfigError("config: units2 must be >= 1");
        if (nlayers >= 3 && units3 < 1) throw ConfigError("config: units3 must be >= 1");
        if (!(lr > 0.0)) throw ConfigError("config: lr must be > 0");
        if (nepochs < 0) throw ConfigError("config: nepochs must be >= 0");
        if (bs < 1) throw ConfigError("config: bs must be >= 1");
        lag_config.validate();
    }

    /// Deterministic key=value echo (inputs excluded; they are listed
    /// separately by the report emitter).
    std::string echo() const {
        std::ostringstream os;
        os << "nfeatures = " << nfeatures << "\n";
        os << "nlags = " << (auto_lags ? std::string("auto") : std::to_string(nlags)) << "\n";
        os << "msteps = " << msteps << "\n";
        os << "norm = " << flowcast::to_string(norm) << "\n";
        os << "network = " << flowcast::to_string(network) << "\n";
        os << "act = " << flowcast::to_string(act) << "\n";
        os << "optimizer = " << flowcast::to_string(optimizer) << "\n";
        os << "loss = " << flowcast::to_string(loss) << "\n";
        os << "split = " << split << "\n";
        os << "valsplit = " << valsplit << "\n";
        os << "hyper = " << flowcast::to_string(hyper) << "\n";
        os << "niter = " << niter << "\n";
        os << "repeats = " << repeats << "\n";
        os << "seed = " << seed << "\n";
        os << "walk_mode = " << flowcast::to_string(walk_mode) << "\n";
        os << "fit_norm_on_train = " << (fit_norm_on_train ? "true" : "false") << "\n";
        os << "nlayers = " << nlayers << "\n";
        os << "units1 = " << units1 << "\n";
        if (nlayers >= 2) os << "units2 = " << units2 << "\n";
        if (nlayers >= 3) os << "units3 = " << units3 << "\n";
        os << "lr = " << lr << "\n";
        os << "nepochs = " << nepochs << "\n";
        os << "bs = " << bs << "\n";
        return os.str();
    }
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

inline long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

}  // namespace detail

/// Applies one key=value assignment. Unknown keys are rejected; range
/// violations name the admissible range.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;

    if (key == "input") {
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.inputs.push_back(item);
        }
    } else if (key == "header") {
        cfg.has_header = parse_bool(key, value);
    } else if (key == "nfeatures") {
        cfg.nfeatures = static_cast<int>(parse_int(key, value));
    } else if (key == "nlags") {
        if (value == "auto") {
            cfg.auto_lags = true;
        } else {
            cfg.auto_lags = false;
            cfg.nlags = static_cast<int>(parse_int(key, value));
            if (cfg.nlags < 1) throw ConfigError("config: nlags must be >= 1 or 'auto'");
        }
    } else if (key == "msteps") {
        cfg.msteps = static_cast<int>(parse_int(key, value));
    } else if (key == "norm") {
        cfg.norm = norm_method_from_string(value);
    } else if (key == "network") {
        cfg.network = variant_from_string(value);
    } else if (key == "act") {
        cfg.act = activation_from_string(value);
    } else if (key == "optimizer") {
        cfg.optimizer = optimizer_from_string(value);
    } else if (key == "loss") {
        cfg.loss = loss_from_string(value);
    } else if (key == "split") {
        cfg.split = parse_double(key, value);
        if (!(cfg.split > 0.0 && cfg.split < 1.0))
            throw ConfigError("config: split must be in (0,1)");
    } else if (key == "valsplit") {
        cfg.valsplit = parse_double(key, value);
        if (!(cfg.valsplit > 0.0 && cfg.valsplit < 1.0))
            throw ConfigError("config: valsplit must be in (0,1)");
    } else if (key == "hyper") {
        cfg.hyper = hyper_mode_from_string(value);
    } else if (key == "niter") {
        cfg.niter = static_cast<int>(parse_int(key, value));
    } else if (key == "repeats") {
        cfg.repeats = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "fit_norm_on_train") {
        cfg.fit_norm_on_train = parse_bool(key, value);
    } else if (key == "walk_mode") {
        cfg.walk_mode = walk_mode_from_string(value);
    } else if (key == "nlayers") {
        cfg.nlayers = static_cast<int>(parse_int(key, value));
        if (cfg.nlayers < 1 || cfg.nlayers > 3)
            throw ConfigError("config: nlayers must be in [1,3]");
    } else if (key == "units1") {
        cfg.units1 = static_cast<int>(parse_int(key, value));
    } else if (key == "units2") {
        cfg.units2 = static_cast<int>(parse_int(key, value));
    } else if (key == "units3") {
        cfg.units3 = static_cast<int>(parse_int(key, value));
    } else if (key == "lr") {
        cfg.lr = parse_double(key, value);
    } else if (key == "nepochs") {
        cfg.nepochs = static_cast<int>(parse_int(key, value));
    } else if (key == "bs") {
        cfg.bs = static_cast<int>(parse_int(key, value));
    } else if (key == "decoder_units") {
        cfg.decoder_units = static_cast<int>(parse_int(key, value));
    } else if (key == "alpha") {
        cfg.lag_config.alpha = parse_double(key, value);
        if (!(cfg.lag_config.alpha > 0.0 && cfg.lag_config.alpha < 1.0))
            throw ConfigError("config: alpha must be in (0,1)");
    } else if (key == "peak_sensitivity") {
        cfg.lag_config.peak_sensitivity = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "default_lags") {
        cfg.lag_config.default_lags = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "max_acf_lag") {
        cfg.lag_config.max_acf_lag = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "apply_log") {
        cfg.lag_config.apply_log = parse_bool(key, value);
    } else if (key == "apply_diff") {
        cfg.lag_config.apply_diff = parse_bool(key, value);
    } else if (key == "acf_on_transformed") {
        cfg.lag_config.acf_on_transformed = parse_bool(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

/// Parses a flat key=value config file ('#' starts a comment). Later
/// assignments override earlier ones; CLI overrides are applied on top by
/// calling apply_config_entry again.
inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not a key = value assignment");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

}  // namespace flowcast
