#pragma once

#include "geosim/baselines.hpp"
#include "geosim/errors.hpp"
#include "geosim/fft.hpp"
#include "geosim/field.hpp"
#include "geosim/fieldgen.hpp"
#include "geosim/grid.hpp"
#include "geosim/harness.hpp"
#include "geosim/linalg.hpp"
#include "geosim/metrics.hpp"
#include "geosim/rng.hpp"
#include "geosim/stats.hpp"
#include "geosim/transport.hpp"
#include "geosim/variogram.hpp"
