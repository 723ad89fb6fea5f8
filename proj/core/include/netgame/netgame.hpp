#pragma once

#include "netgame/beliefs.hpp"
#include "netgame/block_system.hpp"
#include "netgame/closed_forms.hpp"
#include "netgame/graph.hpp"
#include "netgame/io.hpp"
#include "netgame/prior.hpp"
#include "netgame/solver.hpp"
#include "netgame/types.hpp"
#include "netgame/welfare.hpp"
