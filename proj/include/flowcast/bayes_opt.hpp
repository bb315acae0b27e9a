#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/gp.hpp"
#include "flowcast/random_search.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/search_space.hpp"
#include "flowcast/trial_log.hpp"

namespace flowcast {

namespace detail {

/// Maps a hyper point into the GP's [0,1]^d cube. Log dimensions travel in
/// log10 space; inactive conditional dimensions are imputed at the midpoint.
inline std::vector<double> scale_point(const SearchSpace& space, const HyperPoint& p) {
    std::vector<double> x;
    x.reserve(space.dims.size());
    for (const Dimension& d : space.dims) {
        const auto v = p.get(d.name);
        if (!v) {
            x.push_back(0.5);
            continue;
        }
        double lo = d.lower, hi = d.upper, val = *v;
        if (d.scale == ParamScale::Log10) {
            lo = std::log10(lo);
            hi = std::log10(hi);
            val = std::log10(val);
        }
        x.push_back((val - lo) / (hi - lo));
    }
    return x;
}

/// Inverse of scale_point: unscale, round integer dims, drop inactive dims.
inline HyperPoint unscale_point(const SearchSpace& space, const std::vector<double>& x) {
    int nlayers = 1;
    for (std::size_t i = 0; i < space.dims.size(); ++i)
        if (space.dims[i].name == "nlayers")
            nlayers = static_cast<int>(std::lround(
                space.dims[i].lower + x[i] * (space.dims[i].upper - space.dims[i].lower)));

    HyperPoint p;
    for (std::size_t i = 0; i < space.dims.size(); ++i) {
        const Dimension& d = space.dims[i];
        if (!dimension_active(d, nlayers)) continue;
        double lo = d.lower, hi = d.upper;
        double val;
        if (d.scale == ParamScale::Log10) {
            const double llo = std::log10(lo), lhi = std::log10(hi);
            val = std::pow(10.0, llo + x[i] * (lhi - llo));
        } else {
            val = lo + x[i] * (hi - lo);
        }
        if (d.kind == ParamKind::Integer) val = std::lround(val);
        val = std::min(std::max(val, lo), hi);
        p.values.emplace_back(d.name, val);
    }
    return p;
}

/// Expected improvement for maximizing f; zero when the posterior collapses.
inline double expected_improvement(double mean, double var, double f_best) {
    const double sigma = std::sqrt(var);
    if (sigma < 1e-12) return 0.0;
    const double zscore = (mean - f_best) / sigma;
    const double cdf = 0.5 * std::erfc(-zscore / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * zscore * zscore) / std::sqrt(2.0 * 3.14159265358979323846);
    const double ei = (mean - f_best) * cdf + sigma * pdf;
    return ei > 0.0 ? ei : 0.0;
}

}  // namespace detail

struct BayesOptOptions {
    int init_points = 10;
    int candidates = 1000;     // acquisition candidate draws per step
    int refine_sweeps = 6;     // coordinate-search passes around the best candidate
    double gp_length_scale = 0.5;
    double gp_noise = 1e-6;
    double gp_max_noise = 1e-2;
};

/// Gaussian-process Bayesian optimization of the validation MAE.
///
/// Phase 1 draws `init_points` random configurations; afterwards each step
/// fits the surrogate to (scaled point -> -MAE), maximizes expected
/// improvement over seeded candidates plus a local coordinate refinement,
/// and evaluates the winner. If the surrogate cannot be factorized even at
/// the jitter cap, the step falls back to a random sample.
inline TrialLog bayesian_opt(const Objective& objective, const SearchSpace& space, int niter,
                             std::uint64_t master_seed, const BayesOptOptions& options = {}) {
    if (niter < 1) throw ConfigError("bayesian_opt: niter must be >= 1");
    if (options.init_points < 1) throw ConfigError("bayesian_opt: init_points must be >= 1");
    if (niter <= options.init_points)
        throw ConfigError("bayesian_opt: niter must exceed init_points");
    space.validate();

    TrialLog log;
    std::vector<std::vector<double>> xs;  // scaled evaluated points
    std::vector<double> ys;               // -MAE (finite trials only)

    auto evaluate = [&](int index, const HyperPoint& point) {
        Trial t;
        t.index = index;
        t.seed = derive_seed(master_seed, static_cast<std::uint64_t>(index));
        t.point = point;
        const auto start = std::chrono::steady_clock::now();
        try {
            const ObjectiveResult r = objective(t.point, t.seed);
            t.val_mae = r.val_mae;
            t.val_rmse = r.val_rmse;
        } catch (const std::exception& e) {
            t.failed = true;
            t.error = e.what();
        }
        t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!t.failed && std::isfinite(t.val_mae)) {
            xs.push_back(detail::scale_point(space, t.point));
            ys.push_back(-t.val_mae);
        }
        log.push(std::move(t));
    };

    for (int i = 0; i < options.init_points; ++i)
        evaluate(i, sample_uniform(space, derive_seed(master_seed, static_cast<std::uint64_t>(i))));

    const std::size_t d = space.dims.size();
    for (int i = options.init_points; i < niter; ++i) {
        // Candidate generation has its own derived stream so objective seeds
        // and acquisition seeds never collide.
        Rng rng(derive_seed(master_seed ^ 0xB0A0C0D0E0F01234ULL, static_cast<std::uint64_t>(i)));

        GaussianProcess gp(options.gp_length_scale, options.gp_noise, options.gp_max_noise);
        const bool ok = !xs.empty() && gp.fit(xs, ys);
        if (!ok) {
            evaluate(i, sample_uniform(space, derive_seed(master_seed, static_cast<std::uint64_t>(i))));
            continue;
        }
        double f_best = ys[0];
        for (double v : ys) f_best = std::max(f_best, v);

        auto acquisition = [&](const std::vector<double>& x) {
            const auto [mean, var] = gp.predict(x);
            return detail::expected_improvement(mean, var, f_best);
        };

        std::vector<double> best_x(d, 0.5);
        double best_a = -1.0;
        for (int c = 0; c < options.candidates; ++c) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform();
            const double a = acquisition(x);
            if (a > best_a) {
                best_a = a;
                best_x = x;
            }
        }
        // Local refinement: coordinate steps with halving radius.
        double radius = 0.1;
        for (int sweep = 0; sweep < options.refine_sweeps; ++sweep) {
            for (std::size_t j = 0; j < d; ++j) {
                for (const double dir : {-1.0, 1.0}) {
                    std::vector<double> x = best_x;
                    x[j] = std::min(1.0, std::max(0.0, x[j] + dir * radius));
                    const double a = acquisition(x);
                    if (a > best_a) {
                        best_a = a;
                        best_x = x;
                    }
                }
            }
            radius *= 0.5;
        }

        evaluate(i, detail::unscale_point(space, best_x));
    }
    return log;
}

}  // namespace flowcast
