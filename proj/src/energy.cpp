#include "traceform/energy.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace traceform {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double cell_term(double du, double dv, double h) { return 0.5 * (du * dv) / h; }

double sum_terms(const std::vector<EnergyTerm>& terms) {
    double total = 0.0;
    for (const auto& t : terms) total += t.value;
    return total;
}

void require_vanishing_on_f(const GridFunction& u, const IntervalSet& set, double tol, const char* name) {
    const auto x = u.nodes();
    const auto y = u.values();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (set.region_of(x[i]) == Region::F && std::abs(y[i]) > tol) {
            throw PreconditionError(std::string("part_energy: ") + name + " does not vanish on F (value " +
                                    fmt(y[i]) + " at " + fmt(x[i]) + "); u = 0 on F is required");
        }
    }
}

}  // namespace

const char* to_string(FormTag tag) {
    switch (tag) {
        case FormTag::Full: return "full";
        case FormTag::Subspace: return "subspace";
        case FormTag::Part: return "part";
        case FormTag::Trace: return "trace";
        case FormTag::TraceSubspace: return "trace_subspace";
        case FormTag::TraceComplement: return "trace_complement";
        case FormTag::Darned: return "darned";
    }
    return "?";
}

EnergyReport dirichlet_energy(const GridFunction& u, const GridFunction& v) {
    const auto [a, b] = on_common_grid(u, v);
    const auto x = a.nodes();
    EnergyReport rep;
    rep.tag = FormTag::Full;
    rep.breakdown.reserve(a.cells());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        rep.breakdown.push_back({x[i], x[i + 1],
                                 cell_term(a.values()[i + 1] - a.values()[i], b.values()[i + 1] - b.values()[i], h)});
    }
    rep.value = sum_terms(rep.breakdown);
    return rep;
}

EnergyReport subspace_energy(const GridFunction& u, const GridFunction& v, const IntervalSet& set, double tol) {
    if (!is_in_subspace(u, set, tol)) {
        throw PreconditionError("subspace_energy: first argument has nonzero slope on F (u' = 0 a.e. on F fails)");
    }
    if (!is_in_subspace(v, set, tol)) {
        throw PreconditionError("subspace_energy: second argument has nonzero slope on F (u' = 0 a.e. on F fails)");
    }
    auto rep = dirichlet_energy(u, v);
    rep.tag = FormTag::Subspace;
    std::erase_if(rep.breakdown,
                  [&set](const EnergyTerm& t) { return set.region_of(0.5 * (t.lo + t.hi)) == Region::F; });
    rep.value = sum_terms(rep.breakdown);
    return rep;
}

EnergyReport part_energy(const GridFunction& u, const GridFunction& v, const IntervalSet& set, double tol) {
    require_adapted(u, set, "part_energy");
    require_adapted(v, set, "part_energy");
    require_vanishing_on_f(u, set, tol, "first argument");
    require_vanishing_on_f(v, set, tol, "second argument");
    const auto full = dirichlet_energy(u, v);
    EnergyReport rep;
    rep.tag = FormTag::Part;
    for (const auto& t : full.breakdown) {
        if (set.region_of(0.5 * (t.lo + t.hi)) == Region::G) rep.breakdown.push_back(t);
    }
    rep.value = sum_terms(rep.breakdown);
    if (std::abs(rep.value - full.value) > 1e-12 * std::max(1.0, std::abs(full.value))) {
        throw PreconditionError("part_energy: F-cells carry energy " + fmt(full.value - rep.value) +
                                "; the arguments do not vanish on F");
    }
    return rep;
}

double energy_measure(const GridFunction& u, Interval a) {
    const auto x = u.nodes();
    const auto s = derivative(u);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double lo = std::max(x[i], a.lo);
        const double hi = std::min(x[i + 1], a.hi);
        if (hi > lo) total += s[i] * s[i] * (hi - lo);
    }
    return total;
}

double energy_measure(const GridFunction& u, const IntervalSet& set, Region which) {
    require_adapted(u, set, "energy_measure");
    const auto x = u.nodes();
    const auto s = derivative(u);
    const auto regions = cell_regions(u, set);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (regions[i] == which) total += s[i] * s[i] * (x[i + 1] - x[i]);
    }
    return total;
}

double subspace_energy_measure(const GridFunction& u, const IntervalSet& set, Interval a) {
    require_adapted(u, set, "subspace_energy_measure");
    const auto x = u.nodes();
    const auto s = derivative(u);
    const auto regions = cell_regions(u, set);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (regions[i] != Region::G) continue;
        const double lo = std::max(x[i], a.lo);
        const double hi = std::min(x[i + 1], a.hi);
        if (hi > lo) total += s[i] * s[i] * (hi - lo);
    }
    return total;
}

GridFunction unit_contraction(const GridFunction& u) {
    const auto x = u.nodes();
    const auto y = u.values();
    std::vector<double> nodes{x[0]};
    std::vector<double> values{std::clamp(y[0], 0.0, 1.0)};
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double y0 = y[i];
        const double y1 = y[i + 1];
        std::pair<double, double> cuts[2];
        int n = 0;
        for (double level : {0.0, 1.0}) {
            if ((y0 - level) * (y1 - level) < 0.0) {
                const double xc = x[i] + (level - y0) / (y1 - y0) * (x[i + 1] - x[i]);
                if (xc > x[i] && xc < x[i + 1]) cuts[n++] = {xc, level};
            }
        }
        if (n == 2 && cuts[0].first > cuts[1].first) std::swap(cuts[0], cuts[1]);
        for (int k = 0; k < n; ++k) {
            if (cuts[k].first > nodes.back()) {
                nodes.push_back(cuts[k].first);
                values.push_back(cuts[k].second);
            }
        }
        nodes.push_back(x[i + 1]);
        values.push_back(std::clamp(y1, 0.0, 1.0));
    }
    return GridFunction(std::move(nodes), std::move(values));
}

}  // namespace traceform
