#pragma once

// Convenience umbrella for the whole library.

#include "spinex/baselines.hpp"
#include "spinex/bench.hpp"
#include "spinex/clusterer.hpp"
#include "spinex/core.hpp"
#include "spinex/datasets.hpp"
#include "spinex/engine.hpp"
#include "spinex/explain.hpp"
#include "spinex/metrics.hpp"
#include "spinex/preprocess.hpp"
#include "spinex/sha256.hpp"
#include "spinex/similarity.hpp"
