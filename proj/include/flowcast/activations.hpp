#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"

namespace flowcast {

enum class Activation { Tanh, Relu, Sigmoid, Softmax };

inline const char* to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softmax: return "softmax";
    }
    return "?";
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "softmax") return Activation::Softmax;
    throw ConfigError("unknown activation '" + s + "' (choose tanh, relu, sigmoid, softmax)");
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// out[i] = act(pre[i]); softmax normalizes across the whole vector with
/// max-subtraction for stability.
inline void activate(Activation kind, const double* pre, double* out, int n) {
    switch (kind) {
        case Activation::Tanh:
            for (int i = 0; i < n; ++i) out[i] = std::tanh(pre[i]);
            return;
        case Activation::Relu:
            for (int i = 0; i < n; ++i) out[i] = pre[i] > 0.0 ? pre[i] : 0.0;
            return;
        case Activation::Sigmoid:
            for (int i = 0; i < n; ++i) out[i] = sigmoid(pre[i]);
            return;
        case Activation::Softmax: {
            if (n < 1) throw DataError("softmax: empty input");
            double mx = pre[0];
            for (int i = 1; i < n; ++i) mx = std::max(mx, pre[i]);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                out[i] = std::exp(pre[i] - mx);
                sum += out[i];
            }
            for (int i = 0; i < n; ++i) out[i] /= sum;
            return;
        }
    }
}

inline std::vector<double> activation(Activation kind, const std::vector<double>& x) {
    std::vector<double> out(x.size());
    if (!x.empty()) activate(kind, x.data(), out.data(), static_cast<int>(x.size()));
    return out;
}

/// downstream = J_act(pre)^T * upstream, accumulated into `downstream`.
/// Elementwise kinds use the derivative expressed through the output; softmax
/// needs the full Jacobian-vector product s .* (u - <u, s>).
inline void activate_backward_add(Activation kind, const double* pre, const double* out,
                                  const double* upstream, double* downstream, int n) {
    switch (kind) {
        case Activation::Tanh:
            for (int i = 0; i < n; ++i) downstream[i] += upstream[i] * (1.0 - out[i] * out[i]);
            return;
        case Activation::Relu:
            for (int i = 0; i < n; ++i) downstream[i] += pre[i] > 0.0 ? upstream[i] : 0.0;
            return;
        case Activation::Sigmoid:
            for (int i = 0; i < n; ++i) downstream[i] += upstream[i] * out[i] * (1.0 - out[i]);
            return;
        case Activation::Softmax: {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += upstream[i] * out[i];
            for (int i = 0; i < n; ++i) downstream[i] += out[i] * (upstream[i] - dot);
            return;
        }
    }
}

}  // namespace flowcast
