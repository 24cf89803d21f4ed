#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace traceform {

/// Declared behaviour of the open set G outside the computational window.
enum class Tail { AllG, AllF, Periodic };

enum class Region { G, F };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Tails {
    Tail left = Tail::AllF;
    Tail right = Tail::AllF;
};

/// A maximal run of the window lying in G (an open component) or in F (a closed component).
/// `index` points into IntervalSet::components() or IntervalSet::f_components().
struct Piece {
    double lo;
    double hi;
    Region region;
    std::size_t index;
};

struct ValidationReport {
    double delta = 0.0;
    bool sorted = true;
    bool inside_window = true;
    bool no_overlaps = true;
    bool no_shared_endpoints = true;
    bool no_isolated_f_points = true;
    bool tails_consistent = true;
    bool measure_dense = false;
    /// F-runs of the window long enough to contain a test interval missing G.
    std::vector<Interval> sparse_subintervals;
    std::vector<std::string> problems;

    bool structurally_valid() const {
        return sorted && inside_window && no_overlaps && no_shared_endpoints &&
               no_isolated_f_points && tails_consistent;
    }
    bool ok() const { return structurally_valid() && measure_dense; }
};

/// The open set G as a finite list of disjoint open components inside a window,
/// together with tail declarations. F = complement of G is derived.
///
/// Immutable after construction. Components never share an endpoint, so every
/// F-run inside the window has positive length.
class IntervalSet {
public:
    /// Validates and builds. Components are sorted by left endpoint first.
    /// Throws ValidationError naming the offending pair on overlap or shared endpoint.
    static IntervalSet build(std::vector<Interval> components, Tails tails, Interval window,
                             std::optional<double> period = std::nullopt);

    const Interval& window() const { return window_; }
    Tails tails() const { return tails_; }
    /// Period length when tails are Periodic (equal to the window length).
    std::optional<double> period() const { return period_; }

    std::span<const Interval> components() const { return components_; }
    std::span<const Interval> f_components() const { return f_components_; }
    std::span<const Piece> pieces() const { return pieces_; }

    /// H: the finite endpoints of the listed components, ascending. Always 2 * components().size().
    std::vector<double> endpoints() const;

    /// Finite endpoint b_- of the unbounded component (-inf, b_-), present when the left tail is AllG.
    std::optional<double> unbounded_left_endpoint() const;
    /// Finite endpoint a_+ of the unbounded component (a_+, inf), present when the right tail is AllG.
    std::optional<double> unbounded_right_endpoint() const;

    /// True when x is an endpoint of a listed component or of an unbounded tail component.
    bool is_endpoint(double x) const;

    /// Region of a window point. Component endpoints belong to F.
    Region region_of(double x) const;

    /// Index of the piece containing x (x inside the window). At a boundary between two
    /// pieces the later piece is returned.
    std::size_t piece_index(double x) const;

    /// Cumulative mass of G (or F) on [window.lo, x]; negative for x left of the window.
    /// Tail declarations define the mass outside the window.
    double cumulative(Region which, double x) const;

    double window_mass(Region which) const;

    /// Full preimage inside the window of the value `mass` under cumulative(which, .):
    /// a single point, or the closed run of the other region on which the cumulative is
    /// constant. Requires 0 <= mass <= window_mass(which).
    Interval cumulative_preimage(Region which, double mass) const;

private:
    IntervalSet() = default;

    Interval window_;
    Tails tails_;
    std::optional<double> period_;
    std::vector<Interval> components_;
    std::vector<Interval> f_components_;
    std::vector<Piece> pieces_;
    std::vector<double> piece_starts_;
    std::vector<double> prefix_g_;
    std::vector<double> prefix_f_;
};

/// Exact Lebesgue mass of G or F intersected with [query.lo, query.hi].
double lebesgue(const IntervalSet& set, Interval query, Region which);

/// Smith-Volterra-Cantor complement: step i removes 2^(i-1) open middle intervals of
/// length 4^(-i)|window|. Endpoints are computed in exact dyadic integer arithmetic and
/// rounded once to double.
IntervalSet svc_complement(int depth, Interval window, Tails tails = {}, int max_depth = 20);

/// One period [0, period] of the periodic fat Cantor layout: the depth-k SVC set K on
/// [0, 1] followed by the gap (1, period). Tails are Periodic on both sides.
IntervalSet periodic_fat_cantor(int depth, double period, int max_depth = 20);

/// Structural checks plus the delta-measure-density flag: every subinterval of the window
/// of length min(delta, |window|) meets G in positive measure.
ValidationReport validate(const IntervalSet& set, double delta);

/// Same checks on raw (possibly invalid) input; never throws for bad components.
ValidationReport validate_components(std::vector<Interval> components, Tails tails, Interval window,
                                     double delta, std::optional<double> period = std::nullopt);

const char* to_string(Tail tail);
Tail tail_from_string(const std::string& name);

}  // namespace traceform
