#pragma once

// Convenience umbrella for the whole library.

#include "darp/assignment_ilp.hpp"
#include "darp/bench.hpp"
#include "darp/fleet.hpp"
#include "darp/insertion.hpp"
#include "darp/instance.hpp"
#include "darp/road_graph.hpp"
#include "darp/sampling.hpp"
#include "darp/simplex.hpp"
#include "darp/solution.hpp"
#include "darp/travel_time_matrix.hpp"
#include "darp/types.hpp"
#include "darp/vga.hpp"
