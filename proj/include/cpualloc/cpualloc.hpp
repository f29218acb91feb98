#pragma once

#include "cpualloc/mdp.hpp"
#include "cpualloc/model_io.hpp"
#include "cpualloc/scenarios.hpp"
#include "cpualloc/simulator.hpp"
#include "cpualloc/solver.hpp"
#include "cpualloc/experiments.hpp"
