#pragma once

// Umbrella header for the proximal-sampling toolkit.

#include "proxsamp/common.hpp"
#include "proxsamp/concentration.hpp"
#include "proxsamp/config.hpp"
#include "proxsamp/csv.hpp"
#include "proxsamp/metrics.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/proxmap.hpp"
#include "proxsamp/rgo.hpp"
#include "proxsamp/rng.hpp"
#include "proxsamp/sampler.hpp"
#include "proxsamp/stats.hpp"
#include "proxsamp/stepsize.hpp"
