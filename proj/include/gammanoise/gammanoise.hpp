#pragma once

#include "error.hpp"
#include "grid.hpp"
#include "spectral_field.hpp"
#include "spectral.hpp"
#include "stats.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "coloring.hpp"
#include "systems.hpp"
#include "params.hpp"
#include "growth.hpp"
#include "fit.hpp"
#include "gaussian_series.hpp"
#include "gamma_operator.hpp"
#include "heat_spde.hpp"
#include "scaling.hpp"
#include "experiments.hpp"
