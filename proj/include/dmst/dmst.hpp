#pragma once

#include "dmst/core.hpp"
#include "dmst/mst.hpp"
#include "dmst/gen.hpp"
#include "dmst/swap.hpp"
#include "dmst/construct.hpp"
#include "dmst/approx.hpp"
#include "dmst/matching.hpp"
#include "dmst/hampath.hpp"
#include "dmst/bench.hpp"
