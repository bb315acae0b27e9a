#pragma once

// Umbrella header for the forecasting engine.

#include "flowcast/acf.hpp"
#include "flowcast/activations.hpp"
#include "flowcast/adf.hpp"
#include "flowcast/bayes_opt.hpp"
#include "flowcast/config.hpp"
#include "flowcast/csv.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/evaluation.hpp"
#include "flowcast/gp.hpp"
#include "flowcast/lag_select.hpp"
#include "flowcast/loss.hpp"
#include "flowcast/lstm.hpp"
#include "flowcast/matrix.hpp"
#include "flowcast/metrics.hpp"
#include "flowcast/model.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/normalize.hpp"
#include "flowcast/optimizer.hpp"
#include "flowcast/pipeline.hpp"
#include "flowcast/random_search.hpp"
#include "flowcast/report.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/search_space.hpp"
#include "flowcast/series.hpp"
#include "flowcast/train.hpp"
#include "flowcast/transforms.hpp"
#include "flowcast/trial_log.hpp"
#include "flowcast/walk_forward.hpp"
#include "flowcast/window.hpp"
