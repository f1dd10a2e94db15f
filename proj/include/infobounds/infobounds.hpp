#pragma once

#include "infobounds/errors.hpp"
#include "infobounds/rate_functions.hpp"
#include "infobounds/peeling_bounds.hpp"
#include "infobounds/estimators.hpp"
#include "infobounds/confidence_sets.hpp"
#include "infobounds/random.hpp"
#include "infobounds/monte_carlo.hpp"
#include "infobounds/bandit_sim.hpp"
