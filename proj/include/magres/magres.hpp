#pragma once

// Everything: spin dynamics, film and ESN reservoirs, readout, tasks,
// metrics, evolution and experiment orchestration.

#include "magres/constants.hpp"
#include "magres/errors.hpp"
#include "magres/esn.hpp"
#include "magres/evaluation.hpp"
#include "magres/evolve.hpp"
#include "magres/experiment.hpp"
#include "magres/field.hpp"
#include "magres/film_reservoir.hpp"
#include "magres/fpenv.hpp"
#include "magres/llg.hpp"
#include "magres/material.hpp"
#include "magres/metrics.hpp"
#include "magres/readout.hpp"
#include "magres/rng.hpp"
#include "magres/snapshot.hpp"
#include "magres/state_matrix.hpp"
#include "magres/tasks.hpp"
