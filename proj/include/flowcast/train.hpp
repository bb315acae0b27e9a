#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/loss.hpp"
#include "flowcast/model.hpp"
#include "flowcast/optimizer.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/window.hpp"

namespace flowcast {

struct TrainConfig {
    int epochs = 50;
    int batch_size = 8;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double validation_split = 0.2;   // carved off the END of the training rows
    LossKind loss = LossKind::Mse;
    std::uint64_t seed = 1;
    bool clip_gradients = true;      // elementwise clip to [-5, 5]

    void validate() const {
        if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
        if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
        if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
        if (!(validation_split > 0.0 && validation_split < 1.0))
            throw ConfigError("train: validation_split must be in (0,1)");
    }
};

namespace detail {

inline void eval_rows(const ForecastModel& model, const Matrix& x, const Matrix& y, int row_begin,
                      int row_end, LossKind loss_kind, double& loss_out, double& mae_out) {
    const int rows = row_end - row_begin;
    Matrix pred(rows, y.cols), truth(rows, y.cols);
    for (int r = 0; r < rows; ++r) {
        const Matrix p = model.predict_window(x.row(row_begin + r));
        std::copy(p.d.begin(), p.d.end(), pred.row(r));
        std::copy(y.row(row_begin + r), y.row(row_begin + r) + y.cols, truth.row(r));
    }
    loss_out = compute_loss(loss_kind, pred, truth).loss;
    mae_out = compute_loss(LossKind::Mae, pred, truth).loss;
}

}  // namespace detail

/// Trains an encoder-decoder forecaster on supervised tensors.
///
/// The last floor(N * validation_split) rows are held out for per-epoch
/// validation ("the last portion of the training set"); mini-batches walk the
/// remaining rows in chronological order with the final short batch kept.
/// Weights start from a seeded uniform [-0.05, 0.05] draw, so a fixed
/// (seed, data, config) triple reproduces the parameters bit for bit.
inline ForecastModel train(const ModelSpec& spec, const SupervisedTensors& tensors,
                           const TrainConfig& config) {
    spec.validate();
    config.validate();
    if (tensors.x.cols != spec.nlags * spec.input_dim)
        throw DataError("train: tensor input width " + std::to_string(tensors.x.cols) +
                        " does not match spec nlags*input_dim");
    if (tensors.y.cols != spec.msteps * spec.output_dim)
        throw DataError("train: tensor output width does not match spec msteps*output_dim");

    const int n_rows = tensors.x.rows;
    const int n_val = static_cast<int>(std::floor(n_rows * config.validation_split));
    if (n_val < 1)
        throw DataError("train: validation split holds no rows (" + std::to_string(n_rows) +
                        " rows at fraction " + std::to_string(config.validation_split) + ")");
    const int n_fit = n_rows - n_val;
    if (n_fit < 1) throw DataError("train: no training rows left after validation split");

    ForecastModel model;
    model.spec = spec;
    model.params = ModelParams::build(spec);
    Rng rng(config.seed);
    model.params.init_uniform(rng);

    if (config.epochs == 0) return model;  // initialization only, empty history

    std::vector<Matrix*> params = model.params.collect();
    ModelParams grads = ModelParams::build(spec);
    std::vector<Matrix*> grad_ptrs = grads.collect();
    OptimizerState opt(config.optimizer, params);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (int start = 0; start < n_fit; start += config.batch_size) {
            const int count = std::min(config.batch_size, n_fit - start);

            Matrix pred(count, tensors.y.cols), truth(count, tensors.y.cols);
            std::vector<SampleCache> caches(count);
            for (int r = 0; r < count; ++r) {
                Matrix window(spec.nlags, spec.input_dim);
                std::copy(tensors.x.row(start + r), tensors.x.row(start + r) + window.size(),
                          window.d.begin());
                caches[r] = model_forward(spec, model.params, window);
                std::copy(caches[r].pred.d.begin(), caches[r].pred.d.end(), pred.row(r));
                std::copy(tensors.y.row(start + r), tensors.y.row(start + r) + tensors.y.cols,
                          truth.row(r));
            }
            const LossResult lr = compute_loss(config.loss, pred, truth);
            epoch_loss += lr.loss * count;

            for (Matrix* g : grad_ptrs) g->fill(0.0);
            for (int r = 0; r < count; ++r) {
                Matrix d_pred(spec.msteps, spec.output_dim);
                std::copy(lr.grad.row(r), lr.grad.row(r) + lr.grad.cols, d_pred.d.begin());
                model_backward(spec, model.params, caches[r], d_pred, grads);
            }
            if (config.clip_gradients)
                for (Matrix* g : grad_ptrs)
                    for (double& v : g->d) v = std::clamp(v, -5.0, 5.0);
            opt.step(params, grad_ptrs, config.learning_rate);
        }

        EpochStats stats;
        stats.train_loss = epoch_loss / n_fit;
        detail::eval_rows(model, tensors.x, tensors.y, n_fit, n_rows, config.loss, stats.val_loss,
                          stats.val_mae);
        model.history.push_back(stats);
    }
    return model;
}

}  // namespace flowcast
