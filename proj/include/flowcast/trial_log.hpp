#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/search_space.hpp"

namespace flowcast {

/// Record of one objective evaluation. Failed trials carry infinite MAE and
/// stay in the log so the search is auditable.
struct Trial {
    int index = 0;
    std::uint64_t seed = 0;
    HyperPoint point;
    double val_mae = std::numeric_limits<double>::infinity();
    double val_rmse = std::numeric_limits<double>::infinity();
    double seconds = 0.0;
    bool failed = false;
    std::string error;
};

struct TrialLog {
    std::vector<Trial> trials;
    int best_index = -1;  // argmin finite validation MAE, earliest on ties

    bool has_best() const { return best_index >= 0; }
    const Trial& best() const {
        if (!has_best()) throw DataError("trial log: no finite trial");
        return trials[static_cast<std::size_t>(best_index)];
    }

    void push(Trial t) {
        trials.push_back(std::move(t));
        const Trial& added = trials.back();
        if (!added.failed &&
            (best_index < 0 || added.val_mae < trials[static_cast<std::size_t>(best_index)].val_mae))
            best_index = added.index;
    }

    /// One line per trial: index, seed, point, MAE, RMSE, seconds. Seconds
    /// are wall-clock and sit last so the deterministic prefix of each line
    /// is directly comparable across runs.
    std::string serialize(bool include_seconds = true) const {
        std::string out = "# trial\tseed\tpoint\tval_mae\tval_rmse";
        if (include_seconds) out += "\tseconds";
        out += "\n";
        char buf[128];
        for (const Trial& t : trials) {
            std::snprintf(buf, sizeof(buf), "%d\t%llu\t", t.index,
                          static_cast<unsigned long long>(t.seed));
            out += buf;
            out += t.point.to_string();
            std::snprintf(buf, sizeof(buf), "\t%.17g\t%.17g", t.val_mae, t.val_rmse);
            out += buf;
            if (include_seconds) {
                std::snprintf(buf, sizeof(buf), "\t%.3f", t.seconds);
                out += buf;
            }
            out += "\n";
        }
        out += "# best " + std::to_string(best_index) + "\n";
        return out;
    }
};

/// Winning point: argmin validation MAE over finite trials, earliest on ties.
inline const Trial& select_best(const TrialLog& log) {
    if (log.trials.empty()) throw DataError("select_best: empty trial log");
    if (!log.has_best()) throw DataError("select_best: all trials failed");
    return log.best();
}

}  // namespace flowcast
