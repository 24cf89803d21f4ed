#pragma once

#include "traceform/interval_set.hpp"
#include "traceform/speed_measure.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace traceform {

/// Boundary classification by finiteness of s(-inf) and s(+inf).
enum class BoundaryCase {
    CaseI,   ///< s(-inf) = -inf and s(+inf) = +inf (recurrent)
    CaseII,  ///< exactly one of s(-inf), s(+inf) finite
    CaseIII  ///< both finite
};

const char* to_string(BoundaryCase c);

/// True when m(G) is infinite to the left (resp. right) of the window.
bool g_mass_infinite_left(const IntervalSet& set);
bool g_mass_infinite_right(const IntervalSet& set);

BoundaryCase classify_case(const IntervalSet& set);

/// Scale function with ds = 1_G dx, s(anchor) = 0.
///
/// At finite depth s is constant on each closed F-run, so inverse() returns the whole
/// preimage rather than a point.
class ScaleFunction {
public:
    explicit ScaleFunction(std::shared_ptr<const IntervalSet> base, double anchor = 0.0);

    double operator()(double x) const;
    /// Preimage of y within the window; throws PreconditionError if y is outside s(window).
    Interval inverse(double y) const;
    Interval image() const;

    const IntervalSet& base() const { return *base_; }
    const std::shared_ptr<const IntervalSet>& base_ptr() const { return base_; }
    double anchor() const { return anchor_; }

private:
    std::shared_ptr<const IntervalSet> base_;
    double anchor_;
    double offset_;
};

double scale_eval(const ScaleFunction& sf, double x);
Interval scale_inverse(const ScaleFunction& sf, double y);
BoundaryCase classify_case(const ScaleFunction& sf);

/// Darning map j(x) = integral of 1_F from z to x. Collapses each closed component
/// [a_n, b_n] of G to the single point p*_n and is strictly increasing across F.
class DarningMap {
public:
    /// z must lie in F and must not be a component endpoint. Without z, the default is the
    /// left end of the first F-run when that is not an endpoint, else the run's midpoint.
    explicit DarningMap(std::shared_ptr<const IntervalSet> base, std::optional<double> z = std::nullopt);

    double operator()(double x) const;
    /// Preimage within the window: a point of F, or a closed component [a_n, b_n].
    Interval inverse(double y) const;

    const IntervalSet& base() const { return *base_; }
    const std::shared_ptr<const IntervalSet>& base_ptr() const { return base_; }
    double z() const { return z_; }

private:
    std::shared_ptr<const IntervalSet> base_;
    double z_;
    double offset_;
};

double darning_map_eval(const DarningMap& dm, double x);

struct CollapsedPoint {
    double location;        ///< p*_n = j([a_n, b_n])
    std::size_t component;  ///< index into IntervalSet::components()
    double width;           ///< d_n = b_n - a_n, the m_j-mass at p*_n
};

/// The image R_j as seen through the window.
struct DarningImage {
    Interval window_image;  ///< [j(w0), j(w1)]
    std::vector<CollapsedPoint> collapsed;
    /// p*_- / p*_+: images of the unbounded components; closed endpoints of R_j carrying
    /// infinite m_j-mass.
    std::optional<double> p_minus;
    std::optional<double> p_plus;
    /// R_j continues past the window image (F unbounded on that side).
    bool left_unbounded = false;
    bool right_unbounded = false;

    bool left_in_image() const { return p_minus.has_value(); }
    bool right_in_image() const { return p_plus.has_value(); }
};

DarningImage darning_image(const DarningMap& dm);

/// Built-in source measures for pushforward_speed.
enum class SpeedSource {
    Lebesgue,  ///< dx on the line
    FLebesgue  ///< 1_F dx
};

/// m o j^{-1} for a built-in source. Lebesgue yields density 1 on the image plus atoms d_n
/// at each p*_n, and infinite atoms at p*_-/p*_+ when unbounded components exist.
SpeedMeasure pushforward_speed(const DarningMap& dm, SpeedSource source);

/// Pushforward of an arbitrary window measure (its carrier must be the window): density on
/// F-runs is transported, density on a component collapses into an atom at p*_n, atoms move
/// to j(location) and are merged.
SpeedMeasure pushforward_speed(const DarningMap& dm, const SpeedMeasure& line_measure);

/// Lebesgue measure on the window with infinite atoms at the finite endpoints of unbounded
/// components (the line measure whose pushforward is m_j).
SpeedMeasure lebesgue_line_measure(const IntervalSet& set);

}  // namespace traceform
