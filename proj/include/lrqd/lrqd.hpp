#pragma once

#include "lrqd/archive_io.hpp"
#include "lrqd/error.hpp"
#include "lrqd/experiment.hpp"
#include "lrqd/generator.hpp"
#include "lrqd/level.hpp"
#include "lrqd/map_elites.hpp"
#include "lrqd/rng.hpp"
#include "lrqd/solver.hpp"
#include "lrqd/stub_generator.hpp"
