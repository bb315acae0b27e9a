#pragma once

#include <cmath>
#include <string>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"

namespace flowcast {

enum class LossKind { Mse, Mae };

inline const char* to_string(LossKind k) { return k == LossKind::Mse ? "mse" : "mae"; }

inline LossKind loss_from_string(const std::string& s) {
    if (s == "mse") return LossKind::Mse;
    if (s == "mae") return LossKind::Mae;
    throw ConfigError("unknown loss '" + s + "' (choose mse, mae)");
}

struct LossResult {
    double loss = 0.0;
    Matrix grad;  // dLoss/dPredictions, same shape as the inputs
};

/// mse: mean squared residual, grad 2(p-y)/count.
/// mae: mean absolute residual, subgradient sign(p-y)/count with sign(0)=0.
inline LossResult compute_loss(LossKind kind, const Matrix& predictions, const Matrix& targets) {
    if (predictions.rows != targets.rows || predictions.cols != targets.cols)
        throw DataError("compute_loss: shape mismatch");
    if (predictions.size() == 0) throw DataError("compute_loss: empty inputs");

    LossResult r;
    r.grad = Matrix(predictions.rows, predictions.cols);
    const double count = static_cast<double>(predictions.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.d.size(); ++i) {
        const double e = predictions.d[i] - targets.d[i];
        if (kind == LossKind::Mse) {
            acc += e * e;
            r.grad.d[i] = 2.0 * e / count;
        } else {
            acc += std::fabs(e);
            r.grad.d[i] = (e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0)) / count;
        }
    }
    r.loss = acc / count;
    return r;
}

}  // namespace flowcast
