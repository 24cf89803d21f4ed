#pragma once

#include "traceform/energy.hpp"
#include "traceform/grid_function.hpp"
#include "traceform/interval_set.hpp"
#include "traceform/scale.hpp"
#include "traceform/speed_measure.hpp"

#include <span>
#include <vector>

namespace traceform {

/// Node data on F: values at every point of H, at both window edges, and optionally at
/// further points of F.
class TraceFunction {
public:
    /// Throws PreconditionError when a node lies in G or an endpoint value is missing.
    static TraceFunction make(std::vector<double> nodes, std::vector<double> values, const IntervalSet& set);
    /// Restriction of an adapted grid function to its nodes in F.
    static TraceFunction restrict(const GridFunction& u, const IntervalSet& set);

    std::span<const double> nodes() const { return fn_.nodes(); }
    std::span<const double> values() const { return fn_.values(); }
    double at(double x) const { return fn_(x); }
    /// The node data as a grid function; on gaps it is already the linear bridge.
    const GridFunction& as_grid() const { return fn_; }

private:
    explicit TraceFunction(GridFunction fn) : fn_(std::move(fn)) {}
    GridFunction fn_;
};

/// H_F phi: phi on F, linear interpolation across each gap.
GridFunction harmonic_extension(const TraceFunction& phi, const IntervalSet& set);

/// Extension that is linear in the scale coordinate s on each gap, sampled at
/// `interior_points` equally spaced points inside each component.
GridFunction harmonic_extension_scale(const TraceFunction& phi, const ScaleFunction& sf, int interior_points = 3);

/// alpha-order hitting transforms for the gap (a, b) started at x:
/// p = E^x[exp(-alpha sigma_F); exit at a], q = E^x[exp(-alpha sigma_F); exit at b].
struct HittingPair {
    double p;
    double q;
};

HittingPair alpha_hitting(Interval gap, double alpha, double x);
/// Same for component n of `set`; x must lie in the closed component.
HittingPair alpha_hitting(const IntervalSet& set, std::size_t n, double alpha, double x);

/// Jump weight 1/(2d) of the pair (a_n, b_n); 0 for d = inf.
double feller_weight(double d);
/// alpha * integral of p_n (1 - r_n) over the gap, in closed form 1/(2d) - c/(2 sinh(c d)), c = sqrt(2 alpha).
double feller_numeric(double d, double alpha);

/// Full trace form: 1/2 * integral over F of phi' psi' plus 1/2 * sum (jumps)/d_n.
/// Terms are listed in node order; jump terms carry `jump = true`.
EnergyReport trace_energy(const TraceFunction& phi, const TraceFunction& psi, const IntervalSet& set);
EnergyReport trace_energy(const TraceFunction& phi, const IntervalSet& set);

struct TraceEnergySplit {
    double local;
    double jump;
};
TraceEnergySplit split(const EnergyReport& trace_report);

/// Jump part only. Requires phi' = 0 on F within tol.
EnergyReport trace_subspace_energy(const TraceFunction& phi, const IntervalSet& set, double tol = 1e-9);

/// 1/2 * integral over F of u'v'. Requires u(a_n) = u(b_n) and v(a_n) = v(b_n) within tol.
EnergyReport trace_complement_energy(const TraceFunction& u, const TraceFunction& v, const IntervalSet& set,
                                     double tol = 1e-9);

/// 1_F dx plus atoms d_n/2 at a_n and b_n, and infinite atoms at the finite endpoints of
/// unbounded components.
struct TraceMeasure {
    SpeedMeasure measure;
};
TraceMeasure trace_measure(const IntervalSet& set);

struct JumpRow {
    double a;
    double b;
    double d;
    double weight;
};
std::vector<JumpRow> jump_table(const IntervalSet& set);

}  // namespace traceform
