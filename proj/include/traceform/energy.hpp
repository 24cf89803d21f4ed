#pragma once

#include "traceform/grid_function.hpp"
#include "traceform/interval_set.hpp"

#include <string>
#include <vector>

namespace traceform {

enum class FormTag { Full, Subspace, Part, Trace, TraceSubspace, TraceComplement, Darned };

const char* to_string(FormTag tag);

/// One additive term of a form: a grid cell [lo, hi] or, for jump terms, the pair (a_n, b_n).
struct EnergyTerm {
    double lo;
    double hi;
    double value;
    bool jump = false;
};

struct EnergyReport {
    double value = 0.0;
    FormTag tag = FormTag::Full;
    std::vector<EnergyTerm> breakdown;
};

/// 1/2 * integral of u'v' over the common domain, summed cell by cell.
EnergyReport dirichlet_energy(const GridFunction& u, const GridFunction& v);

/// 1/2 * integral of u'v' 1_G. Both arguments must satisfy is_in_subspace.
EnergyReport subspace_energy(const GridFunction& u, const GridFunction& v, const IntervalSet& set,
                             double tol = 1e-9);

/// 1/2 * integral over G of u'v' for functions vanishing on F. Throws if either argument does
/// not vanish on F or if the result differs from the full energy.
EnergyReport part_energy(const GridFunction& u, const GridFunction& v, const IntervalSet& set, double tol = 1e-9);

/// Integral of u'^2 over A.
double energy_measure(const GridFunction& u, Interval a);
/// Integral of u'^2 over the part of the window lying in `which`.
double energy_measure(const GridFunction& u, const IntervalSet& set, Region which);
/// Integral of (du/ds)^2 1_G over A; zero whenever A lies in F.
double subspace_energy_measure(const GridFunction& u, const IntervalSet& set, Interval a);

/// 0 v (u ^ 1), refined at level crossings so the clipped function stays piecewise linear.
GridFunction unit_contraction(const GridFunction& u);

}  // namespace traceform
