#pragma once
// Umbrella header.

#include "msalloc/analysis.hpp"
#include "msalloc/exact_solver.hpp"
#include "msalloc/fast_solver.hpp"
#include "msalloc/json_io.hpp"
#include "msalloc/model.hpp"
#include "msalloc/rng.hpp"
#include "msalloc/supernode.hpp"
