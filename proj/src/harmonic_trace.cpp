#include "traceform/harmonic_trace.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace traceform {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double endpoint_gap_tol(double tol, double a, double b) { return tol * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TraceFunction TraceFunction::make(std::vector<double> nodes, std::vector<double> values, const IntervalSet& set) {
    GridFunction fn(std::move(nodes), std::move(values));
    const auto x = fn.nodes();
    for (double xi : x) {
        if (!set.window().contains(xi) || set.region_of(xi) != Region::F) {
            throw PreconditionError("trace function: node " + fmt(xi) + " is not a point of F in the window");
        }
    }
    if (!(fn.domain() == set.window())) {
        throw PreconditionError("trace function: values at both window edges are required");
    }
    for (double e : set.endpoints()) {
        if (!std::binary_search(x.begin(), x.end(), e)) {
            throw PreconditionError("trace function: missing value at endpoint " + fmt(e) + " of H");
        }
    }
    return TraceFunction(std::move(fn));
}

TraceFunction TraceFunction::restrict(const GridFunction& u, const IntervalSet& set) {
    require_adapted(u, set, "trace restriction");
    std::vector<double> nodes;
    std::vector<double> values;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (set.region_of(u.nodes()[i]) == Region::F) {
            nodes.push_back(u.nodes()[i]);
            values.push_back(u.values()[i]);
        }
    }
    return make(std::move(nodes), std::move(values), set);
}

GridFunction harmonic_extension(const TraceFunction& phi, const IntervalSet&) { return phi.as_grid(); }

GridFunction harmonic_extension_scale(const TraceFunction& phi, const ScaleFunction& sf, int interior_points) {
    const auto& set = sf.base();
    std::vector<double> nodes(phi.nodes().begin(), phi.nodes().end());
    std::vector<double> values(phi.values().begin(), phi.values().end());
    for (const auto& c : set.components()) {
        const double fa = phi.at(c.lo);
        const double fb = phi.at(c.hi);
        const double sa = sf(c.lo);
        const double sb = sf(c.hi);
        for (int k = 1; k <= interior_points; ++k) {
            const double x = c.lo + c.length() * k / (interior_points + 1);
            nodes.push_back(x);
            values.push_back(fa + (fb - fa) * (sf(x) - sa) / (sb - sa));
        }
    }
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return nodes[i] < nodes[j]; });
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto i : order) {
        if (!xs.empty() && xs.back() == nodes[i]) continue;
        xs.push_back(nodes[i]);
        ys.push_back(values[i]);
    }
    return GridFunction(std::move(xs), std::move(ys));
}

HittingPair alpha_hitting(Interval gap, double alpha, double x) {
    if (!(alpha > 0.0)) throw PreconditionError("alpha_hitting: alpha must be positive");
    if (!std::isfinite(gap.lo) || !std::isfinite(gap.hi)) {
        throw PreconditionError("alpha_hitting: the component must be bounded");
    }
    if (!(gap.lo < gap.hi) || !gap.contains(x)) {
        throw PreconditionError("alpha_hitting: x = " + fmt(x) + " outside the closed component");
    }
    const double c = std::sqrt(2.0 * alpha);
    const double big = c * gap.length();
    // sinh(A)/sinh(B) = exp(A - B) (1 - exp(-2A)) / (1 - exp(-2B)).
    auto ratio = [big](double a) {
        if (a <= 0.0) return 0.0;
        return std::exp(a - big) * (std::expm1(-2.0 * a) / std::expm1(-2.0 * big));
    };
    return {ratio(c * (gap.hi - x)), ratio(c * (x - gap.lo))};
}

HittingPair alpha_hitting(const IntervalSet& set, std::size_t n, double alpha, double x) {
    const auto comps = set.components();
    if (n >= comps.size()) throw PreconditionError("alpha_hitting: no component with index " + std::to_string(n));
    return alpha_hitting(comps[n], alpha, x);
}

double feller_weight(double d) {
    if (!(d > 0.0)) throw PreconditionError("feller_weight: d must be positive");
    if (std::isinf(d)) return 0.0;
    return 1.0 / (2.0 * d);
}

double feller_numeric(double d, double alpha) {
    if (!(d > 0.0)) throw PreconditionError("feller_numeric: d must be positive");
    if (!std::isfinite(d)) throw PreconditionError("feller_numeric: d must be finite");
    if (!(alpha > 0.0)) throw PreconditionError("feller_numeric: alpha must be positive");
    const double c = std::sqrt(2.0 * alpha);
    const double x = c * d;
    if (x < 1e-3) {
        // 1 - x / sinh(x) = x^2/6 - 7x^4/360 + 31x^6/15120
        const double x2 = x * x;
        return (x2 / 6.0 - 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0) / (2.0 * d);
    }
    // c / (2 sinh(x)) = c exp(-x) / (1 - exp(-2x))
    return 1.0 / (2.0 * d) - c * std::exp(-x) / (-std::expm1(-2.0 * x));
}

EnergyReport trace_energy(const TraceFunction& phi, const TraceFunction& psi, const IntervalSet& set) {
    const auto [a, b] = on_common_grid(phi.as_grid(), psi.as_grid());
    const auto x = a.nodes();
    EnergyReport rep;
    rep.tag = FormTag::Trace;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        const bool gap = set.region_of(0.5 * (x[i] + x[i + 1])) == Region::G;
        const double du = a.values()[i + 1] - a.values()[i];
        const double dv = b.values()[i + 1] - b.values()[i];
        // On a gap h = d_n and du = phi(b_n) - phi(a_n).
        rep.breakdown.push_back({x[i], x[i + 1], 0.5 * (du * dv) / h, gap});
    }
    for (const auto& t : rep.breakdown) rep.value += t.value;

    const double check = dirichlet_energy(harmonic_extension(phi, set), harmonic_extension(psi, set)).value;
    if (std::abs(check - rep.value) > 1e-12 * std::max(1.0, std::abs(check))) {
        throw std::logic_error("trace_energy: disagrees with the energy of the harmonic extension");
    }
    return rep;
}

EnergyReport trace_energy(const TraceFunction& phi, const IntervalSet& set) { return trace_energy(phi, phi, set); }

TraceEnergySplit split(const EnergyReport& trace_report) {
    TraceEnergySplit s{0.0, 0.0};
    for (const auto& t : trace_report.breakdown) (t.jump ? s.jump : s.local) += t.value;
    return s;
}

EnergyReport trace_subspace_energy(const TraceFunction& phi, const IntervalSet& set, double tol) {
    auto rep = trace_energy(phi, set);
    const auto x = phi.nodes();
    const auto y = phi.values();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (set.region_of(0.5 * (x[i] + x[i + 1])) == Region::G) continue;
        const double slope = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        if (std::abs(slope) > tol) {
            throw PreconditionError("trace_subspace_energy: phi' = " + fmt(slope) + " on the F-cell [" + fmt(x[i]) +
                                    ", " + fmt(x[i + 1]) + "]; phi' = 0 a.e. on F is required");
        }
    }
    rep.tag = FormTag::TraceSubspace;
    std::erase_if(rep.breakdown, [](const EnergyTerm& t) { return !t.jump; });
    rep.value = 0.0;
    for (const auto& t : rep.breakdown) rep.value += t.value;
    return rep;
}

EnergyReport trace_complement_energy(const TraceFunction& u, const TraceFunction& v, const IntervalSet& set,
                                     double tol) {
    for (const auto* f : {&u, &v}) {
        for (const auto& c : set.components()) {
            const double fa = f->at(c.lo);
            const double fb = f->at(c.hi);
            if (std::abs(fa - fb) > endpoint_gap_tol(tol, fa, fb)) {
                throw PreconditionError("trace_complement_energy: u(a_n) != u(b_n) on component (" + fmt(c.lo) +
                                        ", " + fmt(c.hi) + "); complement members satisfy u(a_n) = u(b_n)");
            }
        }
    }
    auto rep = trace_energy(u, v, set);
    rep.tag = FormTag::TraceComplement;
    std::erase_if(rep.breakdown, [](const EnergyTerm& t) { return t.jump; });
    rep.value = 0.0;
    for (const auto& t : rep.breakdown) rep.value += t.value;
    return rep;
}

TraceMeasure trace_measure(const IntervalSet& set) {
    std::vector<DensityPiece> pieces;
    for (const auto& f : set.f_components()) pieces.push_back({f.lo, f.hi, 1.0});
    std::vector<Atom> atoms;
    for (const auto& c : set.components()) {
        atoms.push_back({c.lo, 0.5 * c.length()});
        atoms.push_back({c.hi, 0.5 * c.length()});
    }
    if (auto b = set.unbounded_left_endpoint()) atoms.push_back({*b, kInfiniteMass});
    if (auto a = set.unbounded_right_endpoint()) atoms.push_back({*a, kInfiniteMass});
    return {SpeedMeasure::make(set.window(), std::move(pieces), std::move(atoms))};
}

std::vector<JumpRow> jump_table(const IntervalSet& set) {
    std::vector<JumpRow> rows;
    for (const auto& c : set.components()) rows.push_back({c.lo, c.hi, c.length(), feller_weight(c.length())});
    return rows;
}

}  // namespace traceform
