#pragma once

#include "rxc/cycles.hpp"
#include "rxc/error.hpp"
#include "rxc/experiments.hpp"
#include "rxc/instance.hpp"
#include "rxc/numeric.hpp"
#include "rxc/rng.hpp"
#include "rxc/solver.hpp"
#include "rxc/stats.hpp"
#include "rxc/theory.hpp"
