#include "traceform/darned_forms.hpp"

#include "traceform/decomposition.hpp"
#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace traceform {

namespace {

double quad_linear(double h, double a, double b) { return h * (a * a + a * b + b * b) / 3.0; }

}  // namespace

EnergyReport darned_energy(const GridFunction& u_hat, const GridFunction& v_hat) {
    auto rep = dirichlet_energy(u_hat, v_hat);
    rep.tag = FormTag::Darned;
    return rep;
}

GridFunction darn_trace_function(const TraceFunction& phi, const DarningMap& dm, double tol) {
    const auto& set = dm.base();
    for (const auto& c : set.components()) {
        const double fa = phi.at(c.lo);
        const double fb = phi.at(c.hi);
        if (std::abs(fa - fb) > tol) {
            throw PreconditionError("darn_trace_function: phi(a_n) != phi(b_n) on component (" + std::to_string(c.lo) +
                                    ", " + std::to_string(c.hi) + ")");
        }
    }
    std::vector<double> nodes;
    std::vector<double> values;
    for (std::size_t i = 0; i < phi.nodes().size(); ++i) {
        const double p = dm(phi.nodes()[i]);
        if (!nodes.empty() && p == nodes.back()) continue;
        nodes.push_back(p);
        values.push_back(phi.values()[i]);
    }
    return GridFunction(std::move(nodes), std::move(values));
}

double sup_norm(const GridFunction& u) {
    double m = 0.0;
    for (double y : u.values()) m = std::max(m, std::abs(y));
    return m;
}

double l2_norm_sq_line(const GridFunction& u, const IntervalSet& set) {
    const auto x = u.nodes();
    const auto y = u.values();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) total += quad_linear(x[i + 1] - x[i], y[i], y[i + 1]);
    const auto inf = std::numeric_limits<double>::infinity();
    if (set.unbounded_left_endpoint() && y.front() != 0.0) total = inf;
    if (set.unbounded_right_endpoint() && y.back() != 0.0) total = inf;
    return total;
}

double l2_norm_sq(const GridFunction& u, const SpeedMeasure& m) {
    const auto dom = u.domain();
    auto eval = [&](double x) { return u(std::clamp(x, dom.lo, dom.hi)); };
    const auto x = u.nodes();
    double total = 0.0;
    for (const auto& p : m.pieces()) {
        const auto first = std::upper_bound(x.begin(), x.end(), p.lo);
        double lo = p.lo;
        for (auto it = first; lo < p.hi; ++it) {
            const double hi = (it == x.end()) ? p.hi : std::min(*it, p.hi);
            if (hi > lo) total += p.density * quad_linear(hi - lo, eval(lo), eval(hi));
            lo = hi;
            if (it == x.end()) break;
        }
    }
    for (const auto& a : m.atoms()) {
        const double v = eval(a.location);
        if (a.infinite()) {
            if (v != 0.0) return std::numeric_limits<double>::infinity();
        } else {
            total += a.mass * v * v;
        }
    }
    return total;
}

double MetricPair::relative_gap() const {
    if (line == darned) return 0.0;
    const double scale = std::max(std::abs(line), std::abs(darned));
    if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
    return std::abs(line - darned) / scale;
}

bool DarnedSpaceReport::all_agree(double rel) const {
    return std::all_of(samples.begin(), samples.end(), [rel](const SampleEquivalence& s) {
        return s.sup.agree(rel) && s.l2_sq.agree(rel) && s.energy.agree(rel) && s.trace_side_identical;
    });
}

DarnedSpaceReport equivalence_report(std::span<const GridFunction> samples, const DarningMap& dm,
                                     const ScaleFunction& sf, double tol) {
    const auto& set = dm.base();
    const auto m_j = pushforward_speed(dm, SpeedSource::Lebesgue);
    DarnedSpaceReport rep;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& u = samples[k];
        if (!is_in_complement(u, sf, tol)) {
            throw PreconditionError("equivalence_report: sample " + std::to_string(k) +
                                    " is not in the orthogonal complement (u' constant on G fails)");
        }
        const auto u_hat = darn_function(u, dm, tol);
        SampleEquivalence s;
        s.sup = {sup_norm(u), sup_norm(u_hat)};
        s.l2_sq = {l2_norm_sq_line(u, set), l2_norm_sq(u_hat, m_j)};
        s.energy = {dirichlet_energy(u, u).value, darned_energy(u_hat, u_hat).value};
        const auto v_hat = darn_trace_function(TraceFunction::restrict(u, set), dm, tol);
        s.trace_side_identical =
            std::equal(u_hat.nodes().begin(), u_hat.nodes().end(), v_hat.nodes().begin(), v_hat.nodes().end()) &&
            std::equal(u_hat.values().begin(), u_hat.values().end(), v_hat.values().begin(), v_hat.values().end());
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace traceform
