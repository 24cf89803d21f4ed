#include "traceform/decomposition.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace traceform {

namespace {

// g(x_i) = integral of u' 1_G from w0 to x_i.
std::vector<double> g_integral(const GridFunction& u, const std::vector<Region>& regions) {
    const auto y = u.values();
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        g[i + 1] = g[i] + (regions[i] == Region::G ? y[i + 1] - y[i] : 0.0);
    }
    return g;
}

// True when every cell inside each component of G has the same slope within tol.
bool linear_on_components(const GridFunction& u, const IntervalSet& set, double tol, std::size_t* bad = nullptr) {
    const auto x = u.nodes();
    const auto slopes = derivative(u);
    const auto comps = set.components();
    std::size_t i = 0;
    for (std::size_t n = 0; n < comps.size(); ++n) {
        while (x[i] < comps[n].lo) ++i;
        const double ref = slopes[i];
        for (std::size_t k = i; k + 1 < x.size() && x[k + 1] <= comps[n].hi; ++k) {
            if (std::abs(slopes[k] - ref) > tol * std::max(1.0, std::abs(ref))) {
                if (bad) *bad = n;
                return false;
            }
        }
    }
    return true;
}

}  // namespace

Decomposition project_subspace(const GridFunction& u, const ScaleFunction& sf) {
    const auto& set = sf.base();
    require_adapted(u, set, "project_subspace");
    const auto w = set.window();
    if (!w.contains(sf.anchor())) {
        throw PreconditionError("project_subspace: the scale anchor must lie in the window");
    }
    const auto regions = cell_regions(u, set);
    const auto g = g_integral(u, regions);
    const std::vector<double> nodes(u.nodes().begin(), u.nodes().end());
    const double g_anchor = GridFunction(nodes, g)(sf.anchor());
    const double g_end = g.back();

    const BoundaryCase bc = classify_case(sf);
    DecompositionConstants k;
    std::vector<double> u1(u.size());

    switch (bc) {
        case BoundaryCase::CaseI:
            k.c0 = -g_anchor;
            for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = g[i] - g_anchor;
            break;
        case BoundaryCase::CaseII:
            if (!g_mass_infinite_left(set)) {
                k.m_minus_inf = g_anchor;
                u1 = g;
            } else {
                k.m_plus_inf = g_end - g_anchor;
                for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = g[i] - g_end;
            }
            break;
        case BoundaryCase::CaseIII: {
            const double s_range = sf(w.hi) - sf(w.lo);
            const double c1 = s_range > 0.0 ? g_end / s_range : 0.0;
            k.c1 = c1;
            k.c2 = g_anchor - c1 * (sf(sf.anchor()) - sf(w.lo));
            for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = g[i] - c1 * (sf(nodes[i]) - sf(w.lo));
            break;
        }
    }

    std::vector<double> u2(u.size());
    for (std::size_t i = 0; i < u2.size(); ++i) u2[i] = u.values()[i] - u1[i];
    return Decomposition{GridFunction(nodes, std::move(u1)), GridFunction(nodes, std::move(u2)), bc, k};
}

bool is_in_complement(const GridFunction& u, const ScaleFunction& sf, double tol) {
    const auto& set = sf.base();
    require_adapted(u, set, "is_in_complement");
    const auto slopes = derivative(u);
    const auto regions = cell_regions(u, set);
    const bool must_vanish = classify_case(sf) != BoundaryCase::CaseIII;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (regions[i] != Region::G) continue;
        if (must_vanish && std::abs(slopes[i]) > tol) return false;
        lo = std::min(lo, slopes[i]);
        hi = std::max(hi, slopes[i]);
    }
    return !(hi - lo > tol);
}

Decomposition decompose_harmonic(const GridFunction& u, const ScaleFunction& sf, double tol) {
    const auto& set = sf.base();
    require_adapted(u, set, "decompose_harmonic");
    std::size_t bad = 0;
    if (!linear_on_components(u, set, tol, &bad)) {
        const auto c = set.components()[bad];
        throw PreconditionError("decompose_harmonic: u is not harmonic (linear) on component " + std::to_string(bad) +
                                " (" + std::to_string(c.lo) + ", " + std::to_string(c.hi) + ")");
    }
    auto d = project_subspace(u, sf);
    if (!linear_on_components(d.u1, set, tol)) {
        throw std::logic_error("decompose_harmonic: u1 lost linearity on a component of G");
    }
    return d;
}

}  // namespace traceform
