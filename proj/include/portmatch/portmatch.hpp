#pragma once

#include "portmatch/assignment.hpp"
#include "portmatch/clearance.hpp"
#include "portmatch/config.hpp"
#include "portmatch/experiment.hpp"
#include "portmatch/graph.hpp"
#include "portmatch/matchers.hpp"
#include "portmatch/matrix.hpp"
#include "portmatch/oracle.hpp"
#include "portmatch/rng.hpp"
#include "portmatch/simulator.hpp"
#include "portmatch/traffic.hpp"
#include "portmatch/verify.hpp"
#include "portmatch/voq.hpp"
