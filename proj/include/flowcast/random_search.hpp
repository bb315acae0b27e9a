#pragma once

#include <chrono>
#include <cstdint>
#include <functional>

#include "flowcast/errors.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/search_space.hpp"
#include "flowcast/trial_log.hpp"

namespace flowcast {

/// Objective: evaluates a configuration under a given seed and reports the
/// validation scores used for model selection.
struct ObjectiveResult {
    double val_mae = 0.0;
    double val_rmse = 0.0;
};
using Objective = std::function<ObjectiveResult(const HyperPoint&, std::uint64_t seed)>;

/// Draws `niter` independent configurations (trial seeds derived from the
/// master seed) and keeps the full log. An objective failure marks that trial
/// failed with infinite MAE and the search continues.
inline TrialLog random_search(const Objective& objective, const SearchSpace& space, int niter,
                              std::uint64_t master_seed) {
    if (niter < 1) throw ConfigError("random_search: niter must be >= 1");
    space.validate();

    TrialLog log;
    for (int i = 0; i < niter; ++i) {
        Trial t;
        t.index = i;
        t.seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
        t.point = sample_uniform(space, t.seed);
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
        log.push(std::move(t));
    }
    return log;
}

}  // namespace flowcast
