#pragma once

#include <string>
#include <vector>

#include "flowcast/activations.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/lstm.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

enum class Variant { Vanilla, Bidirectional };

inline const char* to_string(Variant v) {
    return v == Variant::Vanilla ? "vanilla" : "bidirectional";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "vanilla") return Variant::Vanilla;
    if (s == "bidirectional" || s == "bd") return Variant::Bidirectional;
    throw ConfigError("unknown network variant '" + s + "' (choose vanilla, bidirectional)");
}

/// Topology of an encoder-decoder forecaster. The encoder stack reads the
/// nlags-long lookback window into a context vector (final hidden state, or
/// the forward/backward concatenation for the bidirectional variant); the
/// decoder re-reads the context once per prediction step and a shared linear
/// head maps each decoder state to the z target values.
struct ModelSpec {
    Variant variant = Variant::Vanilla;
    int nlayers = 1;
    std::vector<int> units;      // encoder units per layer, size nlayers
    Activation activation = Activation::Tanh;
    int nlags = 1;
    int msteps = 1;
    int input_dim = 1;           // m*z
    int output_dim = 1;          // z
    int decoder_units = 0;       // 0 -> same as last encoder layer

    int resolved_decoder_units() const { return decoder_units > 0 ? decoder_units : units.back(); }
    int context_dim() const {
        return (variant == Variant::Bidirectional ? 2 : 1) * units.back();
    }
    int encoder_input_dim(int layer) const {
        if (layer == 0) return input_dim;
        return (variant == Variant::Bidirectional ? 2 : 1) * units[layer - 1];
    }

    void validate() const {
        if (nlayers < 1 || nlayers > 3) throw ConfigError("model: nlayers must be in [1,3]");
        if (static_cast<int>(units.size()) != nlayers)
            throw ConfigError("model: need one unit count per layer");
        for (int u : units)
            if (u < 1) throw ConfigError("model: units must be positive");
        if (nlags < 1 || msteps < 1 || input_dim < 1 || output_dim < 1)
            throw ConfigError("model: nlags, msteps and dimensions must be positive");
    }
};

/// All trainable tensors. `collect` enumerates them in a fixed order shared
/// by the optimizer, the gradient check and the serializer.
struct ModelParams {
    std::vector<LstmParams> enc_fwd;
    std::vector<LstmParams> enc_bwd;  // empty for the vanilla variant
    LstmParams decoder;
    Matrix head_w;  // [output_dim x decoder_units]
    Matrix head_b;  // [output_dim x 1]

    static ModelParams build(const ModelSpec& spec) {
        spec.validate();
        ModelParams p;
        for (int l = 0; l < spec.nlayers; ++l)
            p.enc_fwd.emplace_back(spec.units[l], spec.encoder_input_dim(l));
        if (spec.variant == Variant::Bidirectional)
            for (int l = 0; l < spec.nlayers; ++l)
                p.enc_bwd.emplace_back(spec.units[l], spec.encoder_input_dim(l));
        p.decoder = LstmParams(spec.resolved_decoder_units(), spec.context_dim());
        p.head_w = Matrix(spec.output_dim, spec.resolved_decoder_units());
        p.head_b = Matrix(spec.output_dim, 1);
        return p;
    }

    void init_uniform(Rng& rng, double half_range = 0.05) {
        for (LstmParams& l : enc_fwd) l.init_uniform(rng, half_range);
        for (LstmParams& l : enc_bwd) l.init_uniform(rng, half_range);
        decoder.init_uniform(rng, half_range);
        for (double& v : head_w.d) v = rng.uniform(-half_range, half_range);
        for (double& v : head_b.d) v = rng.uniform(-half_range, half_range);
    }

    std::vector<Matrix*> collect() {
        std::vector<Matrix*> out;
        for (LstmParams& l : enc_fwd) l.collect(out);
        for (LstmParams& l : enc_bwd) l.collect(out);
        decoder.collect(out);
        out.push_back(&head_w);
        out.push_back(&head_b);
        return out;
    }

    std::vector<const Matrix*> collect() const {
        std::vector<const Matrix*> out;
        for (Matrix* m : const_cast<ModelParams*>(this)->collect()) out.push_back(m);
        return out;
    }
};

/// Per-sample forward intermediates for the backward pass.
struct SampleCache {
    std::vector<LayerCache> enc_fwd;
    std::vector<LayerCache> enc_bwd;  // caches over the time-reversed input
    std::vector<double> context;
    Matrix dec_in;   // [msteps x context_dim]
    LayerCache decoder;
    Matrix pred;     // [msteps x output_dim]
};

namespace detail {

/// Time-aligned concatenation of the forward and (re-reversed) backward
/// hidden sequences: row t = [h_fwd[t], h_bwd aligned at t].
inline Matrix concat_bidi_outputs(const LayerCache& fwd, const LayerCache& bwd) {
    const int T = fwd.t_len();
    Matrix out(T, fwd.units + bwd.units);
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < fwd.units; ++j) out(t, j) = fwd.h(t, j);
        for (int j = 0; j < bwd.units; ++j) out(t, fwd.units + j) = bwd.h(T - 1 - t, j);
    }
    return out;
}

}  // namespace detail

/// Forward pass over one lookback window [nlags x input_dim].
inline SampleCache model_forward(const ModelSpec& spec, const ModelParams& params,
                                 const Matrix& window) {
    if (window.rows != spec.nlags || window.cols != spec.input_dim)
        throw DataError("model_forward: window shape [" + std::to_string(window.rows) + "x" +
                        std::to_string(window.cols) + "] does not match spec [" +
                        std::to_string(spec.nlags) + "x" + std::to_string(spec.input_dim) + "]");
    SampleCache cache;
    Matrix seq = window;
    const bool bidi = spec.variant == Variant::Bidirectional;
    for (int l = 0; l < spec.nlayers; ++l) {
        cache.enc_fwd.push_back(lstm_layer_forward(params.enc_fwd[l], seq, spec.activation));
        if (bidi) {
            cache.enc_bwd.push_back(
                lstm_layer_forward(params.enc_bwd[l], reverse_rows(seq), spec.activation));
            seq = detail::concat_bidi_outputs(cache.enc_fwd[l], cache.enc_bwd[l]);
        } else {
            seq = layer_outputs(cache.enc_fwd[l]);
        }
    }

    cache.context = cache.enc_fwd.back().h_last();
    if (bidi) {
        const std::vector<double> tail = cache.enc_bwd.back().h_last();
        cache.context.insert(cache.context.end(), tail.begin(), tail.end());
    }

    cache.dec_in = Matrix(spec.msteps, spec.context_dim());
    for (int s = 0; s < spec.msteps; ++s)
        for (int j = 0; j < spec.context_dim(); ++j) cache.dec_in(s, j) = cache.context[j];
    cache.decoder = lstm_layer_forward(params.decoder, cache.dec_in, spec.activation);

    cache.pred = Matrix(spec.msteps, spec.output_dim);
    for (int s = 0; s < spec.msteps; ++s) {
        double* out = cache.pred.row(s);
        for (int j = 0; j < spec.output_dim; ++j) out[j] = params.head_b.d[j];
        gemv_add(params.head_w, cache.decoder.h.row(s), out);
    }
    return cache;
}

/// Exact reverse-mode gradients for one sample; accumulates into `grads`
/// (which must have the same shape as `params`).
inline void model_backward(const ModelSpec& spec, const ModelParams& params,
                           const SampleCache& cache, const Matrix& d_pred, ModelParams& grads) {
    const bool bidi = spec.variant == Variant::Bidirectional;
    const int ctx = spec.context_dim();

    // Linear head, shared across steps.
    Matrix d_dec_h(spec.msteps, params.decoder.units);
    for (int s = 0; s < spec.msteps; ++s) {
        const double* dp = d_pred.row(s);
        outer_add(grads.head_w, dp, cache.decoder.h.row(s));
        for (int j = 0; j < spec.output_dim; ++j) grads.head_b.d[j] += dp[j];
        gemv_t_add(params.head_w, dp, d_dec_h.row(s));
    }

    // Decoder; its input is the repeated context, so dContext sums over steps.
    const Matrix d_dec_in =
        lstm_layer_backward(params.decoder, cache.decoder, d_dec_h, grads.decoder, spec.activation);
    std::vector<double> d_ctx(ctx, 0.0);
    for (int s = 0; s < spec.msteps; ++s)
        for (int j = 0; j < ctx; ++j) d_ctx[j] += d_dec_in(s, j);

    // Encoder stack, top down.
    const int T = spec.nlags;
    if (!bidi) {
        Matrix d_out(T, spec.units[spec.nlayers - 1]);
        for (int j = 0; j < spec.units[spec.nlayers - 1]; ++j) d_out(T - 1, j) = d_ctx[j];
        for (int l = spec.nlayers - 1; l >= 0; --l) {
            Matrix dx = lstm_layer_backward(params.enc_fwd[l], cache.enc_fwd[l], d_out,
                                            grads.enc_fwd[l], spec.activation);
            d_out = std::move(dx);
        }
        return;
    }

    // Bidirectional: d_out rows are time-aligned [fwd | bwd] pairs.
    const int top_units = spec.units[spec.nlayers - 1];
    Matrix d_out(T, 2 * top_units);
    for (int j = 0; j < top_units; ++j) d_out(T - 1, j) = d_ctx[j];
    // Last backward state aligns with time 0.
    for (int j = 0; j < top_units; ++j) d_out(0, top_units + j) = d_ctx[top_units + j];

    for (int l = spec.nlayers - 1; l >= 0; --l) {
        const int u = spec.units[l];
        Matrix d_h_f(T, u), d_h_b(T, u);
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < u; ++j) {
                d_h_f(t, j) = d_out(t, j);
                d_h_b(T - 1 - t, j) = d_out(t, u + j);  // align to the reversed pass
            }
        Matrix dx_f = lstm_layer_backward(params.enc_fwd[l], cache.enc_fwd[l], d_h_f,
                                          grads.enc_fwd[l], spec.activation);
        Matrix dx_b = lstm_layer_backward(params.enc_bwd[l], cache.enc_bwd[l], d_h_b,
                                          grads.enc_bwd[l], spec.activation);
        const Matrix dx_b_aligned = reverse_rows(dx_b);
        Matrix dx(T, dx_f.cols);
        for (int t = 0; t < T; ++t)
            for (int c = 0; c < dx_f.cols; ++c) dx(t, c) = dx_f(t, c) + dx_b_aligned(t, c);
        d_out = std::move(dx);
    }
}

/// Loss history of one training epoch (normalized units).
struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_mae = 0.0;
};

/// A trained forecaster: topology, parameters and training history.
struct ForecastModel {
    ModelSpec spec;
    ModelParams params;
    std::vector<EpochStats> history;

    /// window: flat [nlags * input_dim] row; returns [msteps x output_dim].
    Matrix predict_window(const double* window) const {
        Matrix w(spec.nlags, spec.input_dim);
        std::copy(window, window + w.size(), w.d.begin());
        return model_forward(spec, params, w).pred;
    }

    /// X2-style input [rows x nlags*input_dim] -> [rows x msteps*output_dim].
    Matrix predict(const Matrix& x) const {
        Matrix out(x.rows, spec.msteps * spec.output_dim);
        for (int r = 0; r < x.rows; ++r) {
            const Matrix p = predict_window(x.row(r));
            std::copy(p.d.begin(), p.d.end(), out.row(r));
        }
        return out;
    }
};

}  // namespace flowcast
