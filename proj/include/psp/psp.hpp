#pragma once

// Everything: graphs, exact shortest paths, the three advice pipelines and
// their text formats.

#include "psp/advice_io.hpp"
#include "psp/bench.hpp"
#include "psp/feasibility.hpp"
#include "psp/graph.hpp"
#include "psp/linear_sssp.hpp"
#include "psp/minbase.hpp"
#include "psp/oracle.hpp"
#include "psp/poly.hpp"
#include "psp/random_graph.hpp"
#include "psp/rational.hpp"
#include "psp/reweight.hpp"
#include "psp/shortest_path.hpp"
#include "psp/surplus.hpp"
