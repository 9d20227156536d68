#pragma once

// Umbrella header for the energentic simulator.

#include "action.hpp"
#include "dynamics.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "policies.hpp"
#include "rng.hpp"
#include "simulation.hpp"
#include "trajectory.hpp"
