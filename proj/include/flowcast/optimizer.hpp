#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"

namespace flowcast {

enum class OptimizerKind { Adam, Sgd, Adagrad, RmsProp };

inline const char* to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::Adam: return "adam";
        case OptimizerKind::Sgd: return "sgd";
        case OptimizerKind::Adagrad: return "adagrad";
        case OptimizerKind::RmsProp: return "rmsprop";
    }
    return "?";
}

inline OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "adam") return OptimizerKind::Adam;
    if (s == "sgd") return OptimizerKind::Sgd;
    if (s == "adagrad") return OptimizerKind::Adagrad;
    if (s == "rmsprop") return OptimizerKind::RmsProp;
    throw ConfigError("unknown optimizer '" + s + "' (choose adam, sgd, adagrad, rmsprop)");
}

/// First/second-moment accumulators per parameter tensor. Constants:
/// adam beta1=0.9 beta2=0.999 eps=1e-7 (bias-corrected), rmsprop rho=0.9
/// eps=1e-7, adagrad eps=1e-7.
class OptimizerState {
public:
    OptimizerState(OptimizerKind kind, const std::vector<Matrix*>& params) : kind_(kind) {
        for (const Matrix* p : params) {
            m_.emplace_back(p->rows, p->cols);
            v_.emplace_back(p->rows, p->cols);
        }
    }

    OptimizerKind kind() const { return kind_; }
    long step_count() const { return t_; }

    void step(const std::vector<Matrix*>& params, const std::vector<Matrix*>& grads,
              double learning_rate) {
        if (params.size() != m_.size() || grads.size() != m_.size())
            throw DataError("optimizer_step: tensor count mismatch");
        ++t_;
        for (std::size_t i = 0; i < params.size(); ++i) {
            Matrix& p = *params[i];
            const Matrix& g = *grads[i];
            switch (kind_) {
                case OptimizerKind::Sgd:
                    for (std::size_t j = 0; j < p.d.size(); ++j) p.d[j] -= learning_rate * g.d[j];
                    break;
                case OptimizerKind::Adam: {
                    const double b1 = 0.9, b2 = 0.999, eps = 1e-7;
                    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
                    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
                    for (std::size_t j = 0; j < p.d.size(); ++j) {
                        m_[i].d[j] = b1 * m_[i].d[j] + (1.0 - b1) * g.d[j];
                        v_[i].d[j] = b2 * v_[i].d[j] + (1.0 - b2) * g.d[j] * g.d[j];
                        const double mhat = m_[i].d[j] / c1;
                        const double vhat = v_[i].d[j] / c2;
                        p.d[j] -= learning_rate * mhat / (std::sqrt(vhat) + eps);
                    }
                    break;
                }
                case OptimizerKind::RmsProp: {
                    const double rho = 0.9, eps = 1e-7;
                    for (std::size_t j = 0; j < p.d.size(); ++j) {
                        v_[i].d[j] = rho * v_[i].d[j] + (1.0 - rho) * g.d[j] * g.d[j];
                        p.d[j] -= learning_rate * g.d[j] / (std::sqrt(v_[i].d[j]) + eps);
                    }
                    break;
                }
                case OptimizerKind::Adagrad: {
                    const double eps = 1e-7;
                    for (std::size_t j = 0; j < p.d.size(); ++j) {
                        v_[i].d[j] += g.d[j] * g.d[j];
                        p.d[j] -= learning_rate * g.d[j] / (std::sqrt(v_[i].d[j]) + eps);
                    }
                    break;
                }
            }
        }
    }

private:
    OptimizerKind kind_;
    long t_ = 0;
    std::vector<Matrix> m_;  // first moment (adam only)
    std::vector<Matrix> v_;  // second moment / accumulator
};

}  // namespace flowcast
