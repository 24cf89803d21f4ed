#pragma once

#include "traceform/energy.hpp"
#include "traceform/grid_function.hpp"
#include "traceform/harmonic_trace.hpp"
#include "traceform/scale.hpp"
#include "traceform/speed_measure.hpp"

#include <span>
#include <vector>

namespace traceform {

/// 1/2 * integral over the image of u-hat' v-hat'.
EnergyReport darned_energy(const GridFunction& u_hat, const GridFunction& v_hat);

/// Darning of a trace function through j restricted to F.
GridFunction darn_trace_function(const TraceFunction& phi, const DarningMap& dm, double tol = 1e-9);

double sup_norm(const GridFunction& u);

/// Squared L2 norm of u on the line: exact integral over the window plus, for each AllG
/// tail, the unbounded component on which u is constant (infinite unless that value is 0).
double l2_norm_sq_line(const GridFunction& u, const IntervalSet& set);

/// Squared L2 norm of a piecewise-linear function against a density-plus-atoms measure.
/// Infinite atoms contribute 0 where the function vanishes and +inf otherwise.
double l2_norm_sq(const GridFunction& u, const SpeedMeasure& m);

struct MetricPair {
    double line;
    double darned;

    double relative_gap() const;
    bool agree(double rel) const { return relative_gap() <= rel; }
};

struct SampleEquivalence {
    MetricPair sup;
    MetricPair l2_sq;
    MetricPair energy;
    /// Line-side and trace-side darnings have identical nodes and values.
    bool trace_side_identical = false;
};

struct DarnedSpaceReport {
    std::vector<SampleEquivalence> samples;

    bool all_agree(double rel = 1e-12) const;
};

/// Each sample must pass is_in_complement for `sf` and be constant on every closed component.
DarnedSpaceReport equivalence_report(std::span<const GridFunction> samples, const DarningMap& dm,
                                     const ScaleFunction& sf, double tol = 1e-9);

}  // namespace traceform
