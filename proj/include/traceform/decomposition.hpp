#pragma once

#include "traceform/grid_function.hpp"
#include "traceform/scale.hpp"

#include <optional>

namespace traceform {

struct DecompositionConstants {
    std::optional<double> c0;           ///< additive constant pinning u1(anchor) = 0 (Case I)
    std::optional<double> m_minus_inf;  ///< G-integral of u' left of the anchor (Case II, left end finite)
    std::optional<double> m_plus_inf;   ///< G-integral of u' right of the anchor (Case II, right end finite)
    std::optional<double> c1;           ///< M / (s(w1) - s(w0)) (Case III)
    std::optional<double> c2;           ///< G-integral of (u' - C1) left of the anchor (Case III)
};

/// u = u1 + u2 with u1 in the scale-function space and u2 in its orthogonal complement.
struct Decomposition {
    GridFunction u1;
    GridFunction u2;
    BoundaryCase case_tag;
    DecompositionConstants constants;
};

/// Projects u onto the subspace. Outside the window u is taken constant, so the integrals
/// from -inf and +inf reduce to window integrals. The anchor of `sf` must lie in the window.
Decomposition project_subspace(const GridFunction& u, const ScaleFunction& sf);

/// u' is constant on G (zero in Cases I and II), decided per G-cell within tol.
bool is_in_complement(const GridFunction& u, const ScaleFunction& sf, double tol = 1e-9);

/// project_subspace for u linear on every component of G; checks that u1 is again
/// linear on every component.
Decomposition decompose_harmonic(const GridFunction& u, const ScaleFunction& sf, double tol = 1e-9);

}  // namespace traceform
