#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/series.hpp"

namespace flowcast {

enum class NormMethod { MinMax, ZScore, Tanh };

inline const char* to_string(NormMethod m) {
    switch (m) {
        case NormMethod::MinMax: return "min-max";
        case NormMethod::ZScore: return "z-score";
        case NormMethod::Tanh: return "tanh";
    }
    return "?";
}

inline NormMethod norm_method_from_string(const std::string& s) {
    if (s == "min-max" || s == "minmax") return NormMethod::MinMax;
    if (s == "z-score" || s == "zscore") return NormMethod::ZScore;
    if (s == "tanh") return NormMethod::Tanh;
    throw ConfigError("unknown normalization method '" + s + "' (choose min-max, z-score, tanh)");
}

/// Per-feature affine (or tanh-squashed) rescaler. Parameters are fitted on
/// a chosen region and the mapping is exactly invertible:
///   min-max : (x - min) / (max - min)
///   z-score : (x - mean) / sd            (population sd, denominator n)
///   tanh    : 0.5 * (tanh(0.01 * (x - mean) / sd) + 1)
class Normalizer {
public:
    struct FeatureParams {
        double a = 0.0;  // min (min-max) or mean (z-score/tanh)
        double b = 1.0;  // max - min, or sd
    };

    Normalizer() = default;

    static Normalizer fit(const Dataset& region, NormMethod method) {
        region.validate();
        Normalizer nz;
        nz.method_ = method;
        for (const Series& f : region.features) {
            FeatureParams p;
            if (method == NormMethod::MinMax) {
                double lo = f.values[0], hi = f.values[0];
                for (double v : f.values) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (!(hi > lo))
                    throw DataError("fit_normalizer: constant feature '" + f.name + "'");
                p.a = lo;
                p.b = hi - lo;
            } else {
                double mean = 0.0;
                for (double v : f.values) mean += v;
                mean /= static_cast<double>(f.size());
                double var = 0.0;
                for (double v : f.values) var += (v - mean) * (v - mean);
                var /= static_cast<double>(f.size());
                if (!(var > 0.0))
                    throw DataError("fit_normalizer: constant feature '" + f.name + "'");
                p.a = mean;
                p.b = std::sqrt(var);
            }
            nz.params_.push_back(p);
        }
        return nz;
    }

    NormMethod method() const { return method_; }
    std::size_t feature_count() const { return params_.size(); }
    const FeatureParams& feature_params(std::size_t i) const { return params_.at(i); }

    double normalize_value(std::size_t feature, double x) const {
        const FeatureParams& p = params_.at(feature);
        switch (method_) {
            case NormMethod::MinMax: return (x - p.a) / p.b;
            case NormMethod::ZScore: return (x - p.a) / p.b;
            case NormMethod::Tanh: return 0.5 * (std::tanh(0.01 * (x - p.a) / p.b) + 1.0);
        }
        return x;
    }

    double denormalize_value(std::size_t feature, double y) const {
        const FeatureParams& p = params_.at(feature);
        switch (method_) {
            case NormMethod::MinMax: return y * p.b + p.a;
            case NormMethod::ZScore: return y * p.b + p.a;
            case NormMethod::Tanh: {
                if (!(y > 0.0 && y < 1.0))
                    throw DataError("denormalize: tanh value " + std::to_string(y) +
                                    " out of range (0,1)");
                return p.a + p.b * std::atanh(2.0 * y - 1.0) / 0.01;
            }
        }
        return y;
    }

    Dataset normalize(const Dataset& data) const {
        check_arity(data);
        Dataset out = data;
        for (std::size_t c = 0; c < out.m(); ++c)
            for (double& v : out.features[c].values) v = normalize_value(c, v);
        return out;
    }

    Dataset denormalize(const Dataset& data) const {
        check_arity(data);
        Dataset out = data;
        for (std::size_t c = 0; c < out.m(); ++c)
            for (double& v : out.features[c].values) v = denormalize_value(c, v);
        return out;
    }

    // Internal state accessors for serialization.
    void set_state(NormMethod method, std::vector<FeatureParams> params) {
        method_ = method;
        params_ = std::move(params);
    }
    const std::vector<FeatureParams>& params() const { return params_; }

private:
    void check_arity(const Dataset& data) const {
        if (data.m() != params_.size())
            throw DataError("normalizer fitted for " + std::to_string(params_.size()) +
                            " features, dataset has " + std::to_string(data.m()));
    }

    NormMethod method_ = NormMethod::MinMax;
    std::vector<FeatureParams> params_;
};

/// Convenience spelling that mirrors the pipeline vocabulary.
inline Normalizer fit_normalizer(const Dataset& fit_region, NormMethod method) {
    return Normalizer::fit(fit_region, method);
}

}  // namespace flowcast
