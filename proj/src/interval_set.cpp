#include "traceform/interval_set.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace traceform {

namespace {

std::string fmt_interval(const Interval& iv) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << iv.lo << ", " << iv.hi << ")";
    return os.str();
}

std::string fmt_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool by_left(const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); }

// Fills the structural fields of `rep` for sorted components.
void check_structure(const std::vector<Interval>& comps, Tails tails, Interval window,
                     std::optional<double> period, ValidationReport& rep) {
    auto fail = [&rep](bool& flag, std::string msg) {
        flag = false;
        rep.problems.push_back(std::move(msg));
    };

    if (!(std::isfinite(window.lo) && std::isfinite(window.hi) && window.lo < window.hi)) {
        fail(rep.inside_window, "window " + fmt_interval(window) + " must satisfy w0 < w1");
        return;
    }
    for (const auto& c : comps) {
        if (!(std::isfinite(c.lo) && std::isfinite(c.hi) && c.lo < c.hi)) {
            fail(rep.inside_window, "component " + fmt_interval(c) + " is empty or not finite");
        } else if (c.lo < window.lo || c.hi > window.hi) {
            fail(rep.inside_window,
                 "component " + fmt_interval(c) + " leaves the window " + fmt_interval(window));
        }
    }
    for (std::size_t i = 1; i < comps.size(); ++i) {
        const auto& a = comps[i - 1];
        const auto& b = comps[i];
        if (a.hi > b.lo) {
            fail(rep.no_overlaps, "components " + fmt_interval(a) + " and " + fmt_interval(b) + " overlap");
        } else if (a.hi == b.lo) {
            fail(rep.no_shared_endpoints,
                 "components " + fmt_interval(a) + " and " + fmt_interval(b) + " share endpoint " +
                     fmt_real(a.hi) +
                     " (violates: no shared endpoints, F has no isolated points)");
        }
    }

    const bool left_periodic = tails.left == Tail::Periodic;
    const bool right_periodic = tails.right == Tail::Periodic;
    if (left_periodic != right_periodic) {
        fail(rep.tails_consistent, "Periodic tails must be declared on both sides");
    }
    if (!left_periodic && !right_periodic && period) {
        fail(rep.tails_consistent, "a period was given but the tails are not Periodic");
    }
    if (left_periodic && right_periodic && period) {
        const double len = window.length();
        if (!(*period > 0.0) || std::abs(*period - len) > 1e-12 * std::max(1.0, len)) {
            fail(rep.tails_consistent, "invalid period " + fmt_real(*period) +
                                           ": the window must span exactly one period");
        }
    }

    if (comps.empty()) return;
    const auto& first = comps.front();
    const auto& last = comps.back();
    if (tails.left == Tail::AllG && first.lo == window.lo) {
        fail(rep.no_shared_endpoints,
             "component " + fmt_interval(first) +
                 " shares the window edge with the unbounded G tail (violates: no shared endpoints)");
    }
    if (tails.right == Tail::AllG && last.hi == window.hi) {
        fail(rep.no_shared_endpoints,
             "component " + fmt_interval(last) +
                 " shares the window edge with the unbounded G tail (violates: no shared endpoints)");
    }
    if (left_periodic && right_periodic && first.lo == window.lo && last.hi == window.hi) {
        fail(rep.no_isolated_f_points, "the period boundary " + fmt_real(window.lo) +
                                           " is an isolated point of F (violates: F has no isolated points)");
    }
}

void fill_density(const IntervalSet& set, ValidationReport& rep) {
    const double test_len = std::min(rep.delta, set.window().length());
    rep.measure_dense = true;
    for (const auto& f : set.f_components()) {
        if (f.length() >= test_len) {
            rep.measure_dense = false;
            rep.sparse_subintervals.push_back(f);
        }
    }
    if (!rep.measure_dense) {
        std::ostringstream os;
        os.precision(17);
        os << rep.sparse_subintervals.size() << " F-run(s) of length >= " << test_len
           << " miss G (violates: measure density at resolution delta)";
        rep.problems.push_back(os.str());
    }
}

}  // namespace

IntervalSet IntervalSet::build(std::vector<Interval> components, Tails tails, Interval window,
                               std::optional<double> period) {
    std::sort(components.begin(), components.end(), by_left);
    ValidationReport rep;
    check_structure(components, tails, window, period, rep);
    if (!rep.structurally_valid()) {
        throw ValidationError(rep.problems.front());
    }

    IntervalSet set;
    set.window_ = window;
    set.tails_ = tails;
    if (tails.left == Tail::Periodic) set.period_ = window.length();
    set.components_ = std::move(components);

    double cursor = window.lo;
    for (std::size_t i = 0; i < set.components_.size(); ++i) {
        const auto& c = set.components_[i];
        if (c.lo > cursor) {
            set.f_components_.push_back({cursor, c.lo});
            set.pieces_.push_back({cursor, c.lo, Region::F, set.f_components_.size() - 1});
        }
        set.pieces_.push_back({c.lo, c.hi, Region::G, i});
        cursor = c.hi;
    }
    if (cursor < window.hi) {
        set.f_components_.push_back({cursor, window.hi});
        set.pieces_.push_back({cursor, window.hi, Region::F, set.f_components_.size() - 1});
    }

    const std::size_t n = set.pieces_.size();
    set.piece_starts_.resize(n);
    set.prefix_g_.assign(n + 1, 0.0);
    set.prefix_f_.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& p = set.pieces_[k];
        set.piece_starts_[k] = p.lo;
        const double len = p.hi - p.lo;
        set.prefix_g_[k + 1] = set.prefix_g_[k] + (p.region == Region::G ? len : 0.0);
        set.prefix_f_[k + 1] = set.prefix_f_[k] + (p.region == Region::F ? len : 0.0);
    }
    return set;
}

std::vector<double> IntervalSet::endpoints() const {
    std::vector<double> h;
    h.reserve(2 * components_.size());
    for (const auto& c : components_) {
        h.push_back(c.lo);
        h.push_back(c.hi);
    }
    return h;
}

std::optional<double> IntervalSet::unbounded_left_endpoint() const {
    if (tails_.left == Tail::AllG) return window_.lo;
    return std::nullopt;
}

std::optional<double> IntervalSet::unbounded_right_endpoint() const {
    if (tails_.right == Tail::AllG) return window_.hi;
    return std::nullopt;
}

bool IntervalSet::is_endpoint(double x) const {
    if (unbounded_left_endpoint() == x || unbounded_right_endpoint() == x) return true;
    auto it = std::lower_bound(components_.begin(), components_.end(), x,
                               [](const Interval& c, double v) { return c.hi < v; });
    return it != components_.end() && (it->lo == x || it->hi == x);
}

std::size_t IntervalSet::piece_index(double x) const {
    auto it = std::upper_bound(piece_starts_.begin(), piece_starts_.end(), x);
    if (it == piece_starts_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(piece_starts_.begin(), it)) - 1;
}

Region IntervalSet::region_of(double x) const {
    if (pieces_.empty()) return Region::F;
    const auto& p = pieces_[piece_index(x)];
    if (p.region == Region::G && (x <= p.lo || x >= p.hi)) return Region::F;
    return p.region;
}

double IntervalSet::window_mass(Region which) const {
    return which == Region::G ? prefix_g_.back() : prefix_f_.back();
}

double IntervalSet::cumulative(Region which, double x) const {
    if (period_) {
        const double p = *period_;
        const double shifts = std::floor((x - window_.lo) / p);
        if (shifts != 0.0) {
            const double reduced = std::clamp(x - shifts * p, window_.lo, window_.hi);
            return shifts * window_mass(which) + cumulative(which, reduced);
        }
    }
    if (x < window_.lo) {
        const bool tail_is_which = (tails_.left == Tail::AllG) == (which == Region::G);
        return tail_is_which ? -(window_.lo - x) : 0.0;
    }
    if (x > window_.hi) {
        const bool tail_is_which = (tails_.right == Tail::AllG) == (which == Region::G);
        return window_mass(which) + (tail_is_which ? x - window_.hi : 0.0);
    }
    const std::size_t k = piece_index(x);
    const auto& p = pieces_[k];
    const auto& prefix = which == Region::G ? prefix_g_ : prefix_f_;
    return prefix[k] + (p.region == which ? x - p.lo : 0.0);
}

Interval IntervalSet::cumulative_preimage(Region which, double mass) const {
    const auto& prefix = which == Region::G ? prefix_g_ : prefix_f_;
    if (!(mass >= 0.0 && mass <= prefix.back())) {
        throw PreconditionError("cumulative preimage: value outside the image of the window");
    }
    // First piece whose cumulative range reaches `mass`.
    const auto it = std::lower_bound(prefix.begin() + 1, prefix.end(), mass);
    const auto k = static_cast<std::size_t>(std::distance(prefix.begin() + 1, it));
    const auto& p = pieces_[k];
    if (p.region != which) return {p.lo, p.hi};
    if (mass == prefix[k + 1] && k + 1 < pieces_.size() && pieces_[k + 1].region != which) {
        return {pieces_[k + 1].lo, pieces_[k + 1].hi};
    }
    const double x = std::min(p.lo + (mass - prefix[k]), p.hi);
    return {x, x};
}

double lebesgue(const IntervalSet& set, Interval query, Region which) {
    if (!(query.lo <= query.hi)) {
        throw ValidationError("lebesgue: query interval " + fmt_interval(query) + " is reversed");
    }
    return set.cumulative(which, query.hi) - set.cumulative(which, query.lo);
}

IntervalSet svc_complement(int depth, Interval window, Tails tails, int max_depth) {
    if (depth < 0 || depth > max_depth) {
        throw PreconditionError("svc_complement: depth " + std::to_string(depth) + " outside [0, " +
                                std::to_string(max_depth) + "]");
    }
    if (depth > 25) {
        throw PreconditionError("svc_complement: depth above 25 exceeds exact dyadic arithmetic");
    }
    // Unit coordinates: the window is [0, 2^p]; every endpoint is an integer.
    const int p = 2 * depth + 1;
    const std::int64_t unit = std::int64_t{1} << p;
    std::vector<std::pair<std::int64_t, std::int64_t>> remaining{{0, unit}};
    std::vector<std::pair<std::int64_t, std::int64_t>> removed;
    for (int i = 1; i <= depth; ++i) {
        const std::int64_t half = std::int64_t{1} << (p - 2 * i - 1);
        std::vector<std::pair<std::int64_t, std::int64_t>> next;
        next.reserve(2 * remaining.size());
        for (auto [l, r] : remaining) {
            const std::int64_t twice_mid = l + r;
            if (twice_mid % 2 != 0) throw std::logic_error("svc_complement: non-dyadic midpoint");
            const std::int64_t mid = twice_mid / 2;
            removed.emplace_back(mid - half, mid + half);
            next.emplace_back(l, mid - half);
            next.emplace_back(mid + half, r);
        }
        remaining = std::move(next);
    }
    std::sort(removed.begin(), removed.end());
    // Exact separation in integer coordinates.
    for (std::size_t i = 1; i < removed.size(); ++i) {
        if (removed[i - 1].second >= removed[i].first) {
            throw std::logic_error("svc_complement: generated components touch");
        }
    }

    const double len = window.length();
    auto to_window = [&](std::int64_t k) {
        if (k == 0) return window.lo;
        if (k == unit) return window.hi;
        return window.lo + len * std::ldexp(static_cast<double>(k), -p);
    };
    std::vector<Interval> comps;
    comps.reserve(removed.size());
    for (auto [l, r] : removed) comps.push_back({to_window(l), to_window(r)});
    // Rounding is monotone; a collision would mean the window is too narrow for this depth.
    for (std::size_t i = 1; i < comps.size(); ++i) {
        if (!(comps[i - 1].hi < comps[i].lo)) {
            throw PreconditionError("svc_complement: depth " + std::to_string(depth) +
                                    " endpoints are not distinct in double precision on window " +
                                    fmt_interval(window));
        }
    }
    std::optional<double> period;
    if (tails.left == Tail::Periodic) period = len;
    return IntervalSet::build(std::move(comps), tails, window, period);
}

IntervalSet periodic_fat_cantor(int depth, double period, int max_depth) {
    if (!(std::isfinite(period) && period > 1.0)) {
        throw PreconditionError("periodic_fat_cantor: invalid period " + fmt_real(period) +
                                " (must exceed the base window length 1)");
    }
    const auto base = svc_complement(depth, {0.0, 1.0}, {}, max_depth);
    std::vector<Interval> comps(base.components().begin(), base.components().end());
    comps.push_back({1.0, period});
    return IntervalSet::build(std::move(comps), {Tail::Periodic, Tail::Periodic}, {0.0, period}, period);
}

ValidationReport validate(const IntervalSet& set, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("validate: delta must be positive");
    ValidationReport rep;
    rep.delta = delta;
    fill_density(set, rep);
    return rep;
}

ValidationReport validate_components(std::vector<Interval> components, Tails tails, Interval window,
                                     double delta, std::optional<double> period) {
    if (!(delta > 0.0)) throw PreconditionError("validate: delta must be positive");
    ValidationReport rep;
    rep.delta = delta;
    if (!std::is_sorted(components.begin(), components.end(), by_left)) {
        rep.sorted = false;
        rep.problems.emplace_back("components are not sorted by left endpoint");
        std::sort(components.begin(), components.end(), by_left);
    }
    check_structure(components, tails, window, period, rep);
    if (!(rep.inside_window && rep.no_overlaps && rep.no_shared_endpoints && rep.no_isolated_f_points &&
          rep.tails_consistent)) {
        rep.measure_dense = false;
        return rep;
    }
    const auto set = IntervalSet::build(std::move(components), tails, window, period);
    fill_density(set, rep);
    return rep;
}

const char* to_string(Tail tail) {
    switch (tail) {
        case Tail::AllG: return "AllG";
        case Tail::AllF: return "AllF";
        case Tail::Periodic: return "Periodic";
    }
    return "?";
}

Tail tail_from_string(const std::string& name) {
    if (name == "AllG") return Tail::AllG;
    if (name == "AllF") return Tail::AllF;
    if (name == "Periodic") return Tail::Periodic;
    throw ValidationError("unknown tail declaration '" + name + "' (expected AllG, AllF or Periodic)");
}

}  // namespace traceform
