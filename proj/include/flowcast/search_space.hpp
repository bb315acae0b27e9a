#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

enum class ParamKind { Integer, Continuous };
enum class ParamScale { Linear, Log10 };

/// One searchable dimension. `active_min_layers` marks conditional unit
/// counts: units2 exists only when nlayers >= 2, units3 only when == 3.
struct Dimension {
    std::string name;
    ParamKind kind = ParamKind::Continuous;
    ParamScale scale = ParamScale::Linear;
    double lower = 0.0;
    double upper = 1.0;
    int active_min_layers = 0;  // 0 = unconditional

    void validate() const {
        if (!(lower < upper))
            throw ConfigError("search space: dimension '" + name + "' needs lower < upper");
        if (scale == ParamScale::Log10 && !(lower > 0.0))
            throw ConfigError("search space: log dimension '" + name + "' needs positive bounds");
    }
};

/// Admissible hyperparameter ranges. The default space: units1/2/3 in
/// [16,1024] (int), lr in [1e-5,1e-2] (log-uniform), nepochs in [50,100],
/// bs in [8,128], nlayers in [1,3].
struct SearchSpace {
    std::vector<Dimension> dims;

    static SearchSpace defaults() {
        SearchSpace s;
        s.dims = {
            {"nlayers", ParamKind::Integer, ParamScale::Linear, 1, 3, 0},
            {"units1", ParamKind::Integer, ParamScale::Linear, 16, 1024, 0},
            {"units2", ParamKind::Integer, ParamScale::Linear, 16, 1024, 2},
            {"units3", ParamKind::Integer, ParamScale::Linear, 16, 1024, 3},
            {"lr", ParamKind::Continuous, ParamScale::Log10, 1e-5, 1e-2, 0},
            {"nepochs", ParamKind::Integer, ParamScale::Linear, 50, 100, 0},
            {"bs", ParamKind::Integer, ParamScale::Linear, 8, 128, 0},
        };
        return s;
    }

    void validate() const {
        if (dims.empty()) throw ConfigError("search space: no dimensions");
        for (const Dimension& d : dims) d.validate();
    }

    const Dimension* find(const std::string& name) const {
        for (const Dimension& d : dims)
            if (d.name == name) return &d;
        return nullptr;
    }
};

/// One sampled configuration: a (name, value) pair per active dimension.
struct HyperPoint {
    std::vector<std::pair<std::string, double>> values;

    std::optional<double> get(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        return std::nullopt;
    }
    double get_or(const std::string& name, double fallback) const {
        return get(name).value_or(fallback);
    }
    bool has(const std::string& name) const { return get(name).has_value(); }

    std::string to_string() const {
        std::string out;
        for (const auto& [k, v] : values) {
            if (!out.empty()) out += " ";
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s=%.12g", k.c_str(), v);
            out += buf;
        }
        return out;
    }
};

namespace detail {

inline int active_layers(const HyperPoint& p) {
    return static_cast<int>(p.get_or("nlayers", 1));
}

inline bool dimension_active(const Dimension& d, int nlayers) {
    return d.active_min_layers == 0 || nlayers >= d.active_min_layers;
}

}  // namespace detail

/// Uniform draw from the space: integers uniform inclusive on their bounds,
/// continuous dims uniform (in log10 space for log-scaled dims). The layer
/// count is drawn first so conditional unit counts are only sampled when
/// active.
inline HyperPoint sample_uniform(const SearchSpace& space, std::uint64_t seed) {
    space.validate();
    Rng rng(seed);
    HyperPoint p;
    int nlayers = 1;
    if (const Dimension* nd = space.find("nlayers")) {
        nlayers = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(nd->lower),
                                                   static_cast<std::int64_t>(nd->upper)));
        p.values.emplace_back("nlayers", static_cast<double>(nlayers));
    }
    for (const Dimension& d : space.dims) {
        if (d.name == "nlayers") continue;
        if (!detail::dimension_active(d, nlayers)) continue;
        double v;
        if (d.kind == ParamKind::Integer) {
            v = static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(d.lower),
                                                    static_cast<std::int64_t>(d.upper)));
        } else if (d.scale == ParamScale::Log10) {
            v = std::pow(10.0, rng.uniform(std::log10(d.lower), std::log10(d.upper)));
        } else {
            v = rng.uniform(d.lower, d.upper);
        }
        p.values.emplace_back(d.name, v);
    }
    return p;
}

}  // namespace flowcast
