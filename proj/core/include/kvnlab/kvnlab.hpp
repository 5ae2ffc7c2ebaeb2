#pragma once

#include "kvnlab/analysis.hpp"
#include "kvnlab/doubleslit.hpp"
#include "kvnlab/error.hpp"
#include "kvnlab/gauge.hpp"
#include "kvnlab/grid.hpp"
#include "kvnlab/kernels.hpp"
#include "kvnlab/measurement.hpp"
#include "kvnlab/operators.hpp"
#include "kvnlab/oscillator.hpp"
#include "kvnlab/parallel.hpp"
#include "kvnlab/propagation.hpp"
#include "kvnlab/states.hpp"
