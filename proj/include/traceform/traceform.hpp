#pragma once

#include "traceform/darned_forms.hpp"
#include "traceform/decomposition.hpp"
#include "traceform/energy.hpp"
#include "traceform/errors.hpp"
#include "traceform/grid_function.hpp"
#include "traceform/harmonic_trace.hpp"
#include "traceform/interval_set.hpp"
#include "traceform/io.hpp"
#include "traceform/parallel.hpp"
#include "traceform/scale.hpp"
#include "traceform/simulation.hpp"
#include "traceform/speed_measure.hpp"
