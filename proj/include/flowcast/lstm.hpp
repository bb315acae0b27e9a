#pragma once

#include <array>
#include <string>
#include <vector>

#include "flowcast/activations.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

// Gate order used everywhere (weights, gradients, serialization).
enum Gate { kForget = 0, kInput = 1, kOutput = 2, kCandidate = 3 };
inline constexpr int kGateCount = 4;

/// Parameters of one LSTM cell: per gate an input weight matrix
/// [units x input_dim], a recurrent matrix [units x units] and a bias
/// [units x 1]. No peephole connections.
struct LstmParams {
    int units = 0;
    int input_dim = 0;
    std::array<Matrix, kGateCount> w;
    std::array<Matrix, kGateCount> u;
    std::array<Matrix, kGateCount> b;

    LstmParams() = default;
    LstmParams(int units_, int input_dim_) : units(units_), input_dim(input_dim_) {
        for (int g = 0; g < kGateCount; ++g) {
            w[g] = Matrix(units, input_dim);
            u[g] = Matrix(units, units);
            b[g] = Matrix(units, 1);
        }
    }

    void init_uniform(Rng& rng, double half_range = 0.05) {
        for (int g = 0; g < kGateCount; ++g) {
            for (double& v : w[g].d) v = rng.uniform(-half_range, half_range);
            for (double& v : u[g].d) v = rng.uniform(-half_range, half_range);
            for (double& v : b[g].d) v = rng.uniform(-half_range, half_range);
        }
    }

    void collect(std::vector<Matrix*>& out) {
        for (int g = 0; g < kGateCount; ++g) {
            out.push_back(&w[g]);
            out.push_back(&u[g]);
            out.push_back(&b[g]);
        }
    }
};

/// Unrolled forward intermediates, one row per timestep. Everything the
/// backward pass needs is kept; buffers are allocated once per layer call.
struct LayerCache {
    Matrix x;  // input sequence copy [T x input_dim]
    Matrix f, i, o, g, pre_g, c, c_act, h;  // each [T x units]
    int units = 0;

    int t_len() const { return x.rows; }
    std::vector<double> h_last() const {
        const double* r = h.row(h.rows - 1);
        return std::vector<double>(r, r + units);
    }
};

namespace detail {

/// One cell step writing into row pointers; `pre` is 3*units scratch for the
/// sigmoid gates, the candidate pre-activation lands in `pre_g`.
inline void cell_step(const LstmParams& p, const double* x, const double* h_prev,
                      const double* c_prev, Activation cell_act, double* f, double* i, double* o,
                      double* g, double* pre_g, double* c, double* c_act, double* h, double* pre) {
    const int n = p.units;
    double* pre_of[kGateCount] = {pre, pre + n, pre + 2 * n, pre_g};
    for (int gate = 0; gate < kGateCount; ++gate) {
        double* dst = pre_of[gate];
        std::copy(p.b[gate].d.begin(), p.b[gate].d.end(), dst);
        gemv_add(p.w[gate], x, dst);
        if (h_prev) gemv_add(p.u[gate], h_prev, dst);
    }
    activate(Activation::Sigmoid, pre_of[kForget], f, n);
    activate(Activation::Sigmoid, pre_of[kInput], i, n);
    activate(Activation::Sigmoid, pre_of[kOutput], o, n);
    activate(cell_act, pre_g, g, n);
    for (int j = 0; j < n; ++j) c[j] = (c_prev ? f[j] * c_prev[j] : 0.0) + i[j] * g[j];
    activate(cell_act, c, c_act, n);
    for (int j = 0; j < n; ++j) h[j] = o[j] * c_act[j];
}

}  // namespace detail

/// Intermediates of one standalone cell step (unit-test surface; the layer
/// path stores the same quantities row-wise in LayerCache).
struct CellStep {
    std::vector<double> f, i, o, g;  // gate activations
    std::vector<double> pre_g;       // candidate pre-activation
    std::vector<double> c;           // cell state after the step
    std::vector<double> c_act;       // act(c)
    std::vector<double> h;           // hidden state after the step
};

/// One forward step of the cell:
///   f = sig(Wf x + Uf h_prev + bf)        i = sig(Wi x + Ui h_prev + bi)
///   o = sig(Wo x + Uo h_prev + bo)        g = act(Wc x + Uc h_prev + bc)
///   c = f .* c_prev + i .* g              h = o .* act(c)
/// The candidate/output nonlinearity defaults to tanh; `cell_act` swaps it.
inline CellStep lstm_cell_forward(const LstmParams& p, const double* x, const double* h_prev,
                                  const double* c_prev, Activation cell_act = Activation::Tanh) {
    const std::size_t n = static_cast<std::size_t>(p.units);
    CellStep s;
    s.f.resize(n);
    s.i.resize(n);
    s.o.resize(n);
    s.g.resize(n);
    s.pre_g.resize(n);
    s.c.resize(n);
    s.c_act.resize(n);
    s.h.resize(n);
    std::vector<double> pre(3 * n);
    detail::cell_step(p, x, h_prev, c_prev, cell_act, s.f.data(), s.i.data(), s.o.data(),
                      s.g.data(), s.pre_g.data(), s.c.data(), s.c_act.data(), s.h.data(),
                      pre.data());
    return s;
}

/// Unrolled forward pass over a [T x input_dim] sequence from zero initial
/// states. Keeps everything needed for the backward pass.
inline LayerCache lstm_layer_forward(const LstmParams& p, const Matrix& sequence,
                                     Activation cell_act = Activation::Tanh) {
    if (sequence.rows < 1) throw DataError("lstm_layer_forward: empty sequence");
    if (sequence.cols != p.input_dim)
        throw DataError("lstm_layer_forward: input dim " + std::to_string(sequence.cols) +
                        " != parameter dim " + std::to_string(p.input_dim));
    const int T = sequence.rows;
    LayerCache cache;
    cache.x = sequence;
    cache.units = p.units;
    for (Matrix* m : {&cache.f, &cache.i, &cache.o, &cache.g, &cache.pre_g, &cache.c,
                      &cache.c_act, &cache.h})
        *m = Matrix(T, p.units);

    std::vector<double> pre(3 * static_cast<std::size_t>(p.units));
    for (int t = 0; t < T; ++t) {
        const double* h_prev = t > 0 ? cache.h.row(t - 1) : nullptr;
        const double* c_prev = t > 0 ? cache.c.row(t - 1) : nullptr;
        detail::cell_step(p, sequence.row(t), h_prev, c_prev, cell_act, cache.f.row(t),
                          cache.i.row(t), cache.o.row(t), cache.g.row(t), cache.pre_g.row(t),
                          cache.c.row(t), cache.c_act.row(t), cache.h.row(t), pre.data());
    }
    return cache;
}

/// Returns all hidden states [T x units] (return_sequences behavior).
inline Matrix layer_outputs(const LayerCache& cache) { return cache.h; }

/// Gradient flow of one layer. `d_h` holds dLoss/dh_t for every timestep
/// (zero rows where a timestep's output is unused). Parameter gradients
/// accumulate into `grad`; returns dLoss/dx as [T x input_dim].
inline Matrix lstm_layer_backward(const LstmParams& p, const LayerCache& cache, const Matrix& d_h,
                                  LstmParams& grad, Activation cell_act = Activation::Tanh) {
    const int T = cache.t_len();
    const int n = p.units;
    if (d_h.rows != T || d_h.cols != n)
        throw DataError("lstm_layer_backward: gradient shape mismatch");

    Matrix dx(T, p.input_dim);
    std::vector<double> dh_next(n, 0.0), dc_next(n, 0.0);
    std::vector<double> dh(n), dca(n), dzf(n), dzi(n), dzo(n), dzg(n), tmp(n);

    for (int t = T - 1; t >= 0; --t) {
        const double* f = cache.f.row(t);
        const double* i = cache.i.row(t);
        const double* o = cache.o.row(t);
        const double* g = cache.g.row(t);
        const double* pre_g = cache.pre_g.row(t);
        const double* c = cache.c.row(t);
        const double* c_act = cache.c_act.row(t);
        const double* c_prev_v = t > 0 ? cache.c.row(t - 1) : nullptr;
        const double* h_prev_v = t > 0 ? cache.h.row(t - 1) : nullptr;

        for (int j = 0; j < n; ++j) dh[j] = d_h(t, j) + dh_next[j];

        // h = o .* act(c):   do = dh .* act(c);  dc += J_act(c)^T (dh .* o)
        std::fill(dca.begin(), dca.end(), 0.0);
        for (int j = 0; j < n; ++j) tmp[j] = dh[j] * o[j];
        activate_backward_add(cell_act, c, c_act, tmp.data(), dca.data(), n);
        for (int j = 0; j < n; ++j) dca[j] += dc_next[j];

        for (int j = 0; j < n; ++j) {
            const double c_prev = c_prev_v ? c_prev_v[j] : 0.0;
            const double df = dca[j] * c_prev;
            const double di = dca[j] * g[j];
            const double do_ = dh[j] * c_act[j];
            dzf[j] = df * f[j] * (1.0 - f[j]);
            dzi[j] = di * i[j] * (1.0 - i[j]);
            dzo[j] = do_ * o[j] * (1.0 - o[j]);
            dc_next[j] = dca[j] * f[j];
            tmp[j] = dca[j] * i[j];  // upstream into the candidate activation
        }
        std::fill(dzg.begin(), dzg.end(), 0.0);
        activate_backward_add(cell_act, pre_g, g, tmp.data(), dzg.data(), n);

        const double* xt = cache.x.row(t);
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        const std::array<const std::vector<double>*, kGateCount> dz = {&dzf, &dzi, &dzo, &dzg};
        for (int gate = 0; gate < kGateCount; ++gate) {
            outer_add(grad.w[gate], dz[gate]->data(), xt);
            if (h_prev_v) outer_add(grad.u[gate], dz[gate]->data(), h_prev_v);
            for (int j = 0; j < n; ++j) grad.b[gate].d[j] += (*dz[gate])[j];
            gemv_t_add(p.w[gate], dz[gate]->data(), dx.row(t));
            gemv_t_add(p.u[gate], dz[gate]->data(), dh_next.data());
        }
    }
    return dx;
}

/// Reverses the row order of a sequence (time flip for the backward half of
/// a bidirectional layer).
inline Matrix reverse_rows(const Matrix& m) {
    Matrix out(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out(r, c) = m(m.rows - 1 - r, c);
    return out;
}

/// Final features of a bidirectional pass: concat(last forward state, last
/// backward state). The backward half consumes the time-reversed sequence.
inline std::vector<double> bidirectional_forward(const LstmParams& fwd, const LstmParams& bwd,
                                                 const Matrix& sequence,
                                                 Activation cell_act = Activation::Tanh) {
    const LayerCache a = lstm_layer_forward(fwd, sequence, cell_act);
    const LayerCache b = lstm_layer_forward(bwd, reverse_rows(sequence), cell_act);
    std::vector<double> out = a.h_last();
    const std::vector<double> tail = b.h_last();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace flowcast
