#include "traceform/grid_function.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
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

double snap_tolerance(Interval w) { return 1e-13 * std::max(1.0, w.length()); }

}  // namespace

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.empty()) throw ValidationError("grid function: at least one node is required");
    if (nodes_.size() != values_.size()) {
        throw ValidationError("grid function: " + std::to_string(nodes_.size()) + " nodes but " +
                              std::to_string(values_.size()) + " values");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i])) {
            throw ValidationError("grid function: non-finite entry at node " + std::to_string(i));
        }
        if (i > 0 && !(nodes_[i - 1] < nodes_[i])) {
            throw ValidationError("grid function: nodes must be strictly increasing (node " + std::to_string(i) +
                                  " at " + fmt(nodes_[i]) + ")");
        }
    }
}

GridFunction GridFunction::constant(std::vector<double> nodes, double c) {
    std::vector<double> values(nodes.size(), c);
    return GridFunction(std::move(nodes), std::move(values));
}

GridFunction GridFunction::sample(std::vector<double> nodes, const std::function<double(double)>& f) {
    std::vector<double> values;
    values.reserve(nodes.size());
    for (double x : nodes) values.push_back(f(x));
    return GridFunction(std::move(nodes), std::move(values));
}

double GridFunction::operator()(double x) const {
    if (x < nodes_.front() || x > nodes_.back()) {
        throw PreconditionError("grid function: evaluation at " + fmt(x) + " outside the domain [" +
                                fmt(nodes_.front()) + ", " + fmt(nodes_.back()) + "]");
    }
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    const auto k = static_cast<std::size_t>(it - nodes_.begin());
    if (*it == x) return values_[k];
    const double x0 = nodes_[k - 1];
    const double x1 = nodes_[k];
    const double t = (x - x0) / (x1 - x0);
    return values_[k - 1] + t * (values_[k] - values_[k - 1]);
}

GridFunction GridFunction::refined(std::span<const double> extra) const {
    std::vector<double> nodes(nodes_);
    for (double x : extra) {
        if (x < nodes_.front() || x > nodes_.back()) {
            throw PreconditionError("grid function: refinement point " + fmt(x) + " outside the domain");
        }
        nodes.push_back(x);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> values;
    values.reserve(nodes.size());
    for (double x : nodes) values.push_back((*this)(x));
    return GridFunction(std::move(nodes), std::move(values));
}

std::vector<double> derivative(const GridFunction& u) {
    const auto x = u.nodes();
    const auto y = u.values();
    std::vector<double> slopes;
    slopes.reserve(u.cells());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) slopes.push_back((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
    return slopes;
}

std::pair<GridFunction, GridFunction> on_common_grid(const GridFunction& u, const GridFunction& v) {
    if (!(u.domain() == v.domain())) {
        throw PreconditionError("incompatible domains [" + fmt(u.domain().lo) + ", " + fmt(u.domain().hi) +
                                "] and [" + fmt(v.domain().lo) + ", " + fmt(v.domain().hi) + "]");
    }
    if (std::equal(u.nodes().begin(), u.nodes().end(), v.nodes().begin(), v.nodes().end())) return {u, v};
    return {u.refined(v.nodes()), v.refined(u.nodes())};
}

namespace {

template <class Op>
GridFunction combine(const GridFunction& u, const GridFunction& v, Op op) {
    auto [a, b] = on_common_grid(u, v);
    std::vector<double> values(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) values[i] = op(a.values()[i], b.values()[i]);
    return GridFunction({a.nodes().begin(), a.nodes().end()}, std::move(values));
}

}  // namespace

GridFunction operator+(const GridFunction& u, const GridFunction& v) {
    return combine(u, v, [](double a, double b) { return a + b; });
}

GridFunction operator-(const GridFunction& u, const GridFunction& v) {
    return combine(u, v, [](double a, double b) { return a - b; });
}

GridFunction operator*(double c, const GridFunction& u) {
    std::vector<double> values(u.values().begin(), u.values().end());
    for (auto& y : values) y *= c;
    return GridFunction({u.nodes().begin(), u.nodes().end()}, std::move(values));
}

GridFunction pointwise_product(const GridFunction& u, const GridFunction& v) {
    return combine(u, v, [](double a, double b) { return a * b; });
}

bool is_adapted(const GridFunction& u, const IntervalSet& set) {
    if (!(u.domain() == set.window())) return false;
    const auto nodes = u.nodes();
    for (double e : set.endpoints()) {
        if (!std::binary_search(nodes.begin(), nodes.end(), e)) return false;
    }
    return true;
}

void require_adapted(const GridFunction& u, const IntervalSet& set, const char* what) {
    if (!(u.domain() == set.window())) {
        throw PreconditionError(std::string(what) + ": grid must span the window exactly");
    }
    const auto nodes = u.nodes();
    for (double e : set.endpoints()) {
        if (!std::binary_search(nodes.begin(), nodes.end(), e)) {
            throw PreconditionError(std::string(what) + ": grid not adapted, endpoint " + fmt(e) +
                                    " of H is not a node (a cell would straddle G and F)");
        }
    }
}

std::vector<Region> cell_regions(const GridFunction& u, const IntervalSet& set) {
    const auto x = u.nodes();
    std::vector<Region> out;
    out.reserve(u.cells());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) out.push_back(set.region_of(0.5 * (x[i] + x[i + 1])));
    return out;
}

std::vector<double> adapted_nodes(const IntervalSet& set) {
    std::vector<double> nodes = set.endpoints();
    nodes.push_back(set.window().lo);
    nodes.push_back(set.window().hi);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

bool is_in_subspace(const GridFunction& u, const IntervalSet& set, double tol) {
    require_adapted(u, set, "is_in_subspace");
    const auto slopes = derivative(u);
    const auto regions = cell_regions(u, set);
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (regions[i] == Region::F && std::abs(slopes[i]) > tol) return false;
    }
    return true;
}

GridFunction darn_function(const GridFunction& u, const DarningMap& dm, double tol) {
    const auto& set = dm.base();
    require_adapted(u, set, "darn_function");
    const auto x = u.nodes();
    const auto y = u.values();
    const auto comps = set.components();

    // Constancy on each closed component [a_n, b_n].
    std::size_t i = 0;
    for (std::size_t n = 0; n < comps.size(); ++n) {
        while (x[i] < comps[n].lo) ++i;
        double lo = y[i];
        double hi = y[i];
        std::size_t k = i;
        for (; k < x.size() && x[k] <= comps[n].hi; ++k) {
            lo = std::min(lo, y[k]);
            hi = std::max(hi, y[k]);
        }
        if (hi - lo > tol) {
            throw PreconditionError("darn_function: u is not constant on the closed component [" + fmt(comps[n].lo) +
                                    ", " + fmt(comps[n].hi) + "] (component " + std::to_string(n) +
                                    ", oscillation " + fmt(hi - lo) + "); u' = 0 a.e. on G is required");
        }
    }

    std::vector<double> nodes;
    std::vector<double> values;
    nodes.reserve(x.size());
    values.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double p = dm(x[k]);
        if (!nodes.empty() && p == nodes.back()) continue;
        if (!nodes.empty() && p < nodes.back()) {
            throw PreconditionError("darn_function: node images out of order near " + fmt(x[k]));
        }
        nodes.push_back(p);
        values.push_back(y[k]);
    }
    return GridFunction(std::move(nodes), std::move(values));
}

GridFunction undarn_function(const GridFunction& u_hat, const DarningMap& dm) {
    const auto& set = dm.base();
    const auto w = set.window();
    const Interval image{dm(w.lo), dm(w.hi)};
    const double tol = snap_tolerance(w);
    if (std::abs(u_hat.domain().lo - image.lo) > tol || std::abs(u_hat.domain().hi - image.hi) > tol) {
        throw PreconditionError("undarn_function: u-hat must be defined exactly on the window image [" +
                                fmt(image.lo) + ", " + fmt(image.hi) + "]");
    }

    // Structural nodes first: their values come from evaluating u-hat at j(x).
    std::vector<double> structural = adapted_nodes(set);
    auto snap = [&](double x) {
        const auto it = std::lower_bound(structural.begin(), structural.end(), x);
        if (it != structural.end() && std::abs(*it - x) <= tol) return *it;
        if (it != structural.begin() && std::abs(*(it - 1) - x) <= tol) return *(it - 1);
        return x;
    };

    std::map<double, double> table;
    const auto yn = u_hat.nodes();
    const auto yv = u_hat.values();
    for (std::size_t k = 0; k < yn.size(); ++k) {
        const double y = std::clamp(yn[k], image.lo, image.hi);
        const Interval pre = dm.inverse(y);
        table.emplace(snap(pre.lo), yv[k]);
        table.emplace(snap(pre.hi), yv[k]);
    }
    auto eval_hat = [&](double y) { return u_hat(std::clamp(y, u_hat.domain().lo, u_hat.domain().hi)); };
    for (double x : structural) {
        if (!table.count(x)) table.emplace(x, eval_hat(dm(x)));
    }

    std::vector<double> nodes;
    std::vector<double> values;
    for (const auto& [x, v] : table) {
        if (!nodes.empty() && x - nodes.back() <= tol) {
            // Keep the structural point when a preimage lands within rounding of it.
            if (std::binary_search(structural.begin(), structural.end(), x)) {
                nodes.back() = x;
                values.back() = v;
            }
            continue;
        }
        nodes.push_back(x);
        values.push_back(v);
    }
    return GridFunction(std::move(nodes), std::move(values));
}

}  // namespace traceform
