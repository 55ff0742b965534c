#pragma once

#include "stablelike/beta_function.hpp"
#include "stablelike/census.hpp"
#include "stablelike/config.hpp"
#include "stablelike/estimators.hpp"
#include "stablelike/io.hpp"
#include "stablelike/jump_path.hpp"
#include "stablelike/occupation.hpp"
#include "stablelike/point_process.hpp"
#include "stablelike/rng.hpp"
#include "stablelike/spectrum.hpp"
#include "stablelike/stats.hpp"
#include "stablelike/streaming.hpp"
