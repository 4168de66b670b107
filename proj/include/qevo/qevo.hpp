#pragma once

// Umbrella header for the full library.

#include "qevo/config.hpp"
#include "qevo/core.hpp"
#include "qevo/csv.hpp"
#include "qevo/framework.hpp"
#include "qevo/harness.hpp"
#include "qevo/host.hpp"
#include "qevo/indicators.hpp"
#include "qevo/operators.hpp"
#include "qevo/problems.hpp"
#include "qevo/qnet.hpp"
#include "qevo/rng.hpp"
#include "qevo/state.hpp"
