#pragma once

// Umbrella header: pulls in the whole library.

#include "qsub/analysis.hpp"
#include "qsub/cli.hpp"
#include "qsub/config.hpp"
#include "qsub/experiment.hpp"
#include "qsub/linalg.hpp"
#include "qsub/problems.hpp"
#include "qsub/rng.hpp"
#include "qsub/sets.hpp"
#include "qsub/solvers.hpp"
#include "qsub/stepsizes.hpp"
