#pragma once

#include "bsg/action_bundle.hpp"
#include "bsg/bandit_bench.hpp"
#include "bsg/coordination.hpp"
#include "bsg/errors.hpp"
#include "bsg/exp3_star_six.hpp"
#include "bsg/experiment.hpp"
#include "bsg/objective.hpp"
#include "bsg/regret.hpp"
#include "bsg/rng.hpp"
#include "bsg/scenario.hpp"
#include "bsg/simplex.hpp"
#include "bsg/submodularity.hpp"
#include "bsg/tracking_objective.hpp"
#include "bsg/tracking_sim.hpp"
