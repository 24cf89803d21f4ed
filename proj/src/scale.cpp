#include "traceform/scale.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace traceform {

namespace {

// Maps y back to a cumulative mass in [0, window_mass], absorbing rounding at the ends.
double clamp_image_value(double mass, double total, const char* what) {
    const double slack = 1e-12 * std::max(1.0, total);
    if (mass < -slack || mass > total + slack) {
        throw PreconditionError(std::string(what) + ": value outside the image of the window");
    }
    return std::clamp(mass, 0.0, total);
}

}  // namespace

const char* to_string(BoundaryCase c) {
    switch (c) {
        case BoundaryCase::CaseI: return "CaseI";
        case BoundaryCase::CaseII: return "CaseII";
        case BoundaryCase::CaseIII: return "CaseIII";
    }
    return "?";
}

bool g_mass_infinite_left(const IntervalSet& set) { return set.tails().left != Tail::AllF; }
bool g_mass_infinite_right(const IntervalSet& set) { return set.tails().right != Tail::AllF; }

BoundaryCase classify_case(const IntervalSet& set) {
    const int infinite_sides = int{g_mass_infinite_left(set)} + int{g_mass_infinite_right(set)};
    if (infinite_sides == 2) return BoundaryCase::CaseI;
    if (infinite_sides == 1) return BoundaryCase::CaseII;
    return BoundaryCase::CaseIII;
}

ScaleFunction::ScaleFunction(std::shared_ptr<const IntervalSet> base, double anchor)
    : base_(std::move(base)), anchor_(anchor) {
    if (!base_) throw ValidationError("scale function: missing interval set");
    offset_ = base_->cumulative(Region::G, anchor_);
}

double ScaleFunction::operator()(double x) const { return base_->cumulative(Region::G, x) - offset_; }

Interval ScaleFunction::inverse(double y) const {
    const double mass = clamp_image_value(y + offset_, base_->window_mass(Region::G), "scale_inverse");
    return base_->cumulative_preimage(Region::G, mass);
}

Interval ScaleFunction::image() const {
    return {(*this)(base_->window().lo), (*this)(base_->window().hi)};
}

double scale_eval(const ScaleFunction& sf, double x) { return sf(x); }
Interval scale_inverse(const ScaleFunction& sf, double y) { return sf.inverse(y); }
BoundaryCase classify_case(const ScaleFunction& sf) { return classify_case(sf.base()); }

DarningMap::DarningMap(std::shared_ptr<const IntervalSet> base, std::optional<double> z) : base_(std::move(base)) {
    if (!base_) throw ValidationError("darning map: missing interval set");
    const auto& set = *base_;
    if (z) {
        if (!set.window().contains(*z) || set.region_of(*z) != Region::F || set.is_endpoint(*z)) {
            throw PreconditionError("darning map: anchor z = " + std::to_string(*z) +
                                    " must lie in F minus the endpoint set H");
        }
        z_ = *z;
    } else {
        const auto runs = set.f_components();
        if (runs.empty()) {
            throw PreconditionError("darning map: F has no interior point in the window (F minus H is empty)");
        }
        const auto& first = runs.front();
        z_ = set.is_endpoint(first.lo) ? 0.5 * (first.lo + first.hi) : first.lo;
    }
    offset_ = set.cumulative(Region::F, z_);
}

double DarningMap::operator()(double x) const { return base_->cumulative(Region::F, x) - offset_; }

Interval DarningMap::inverse(double y) const {
    const double mass = clamp_image_value(y + offset_, base_->window_mass(Region::F), "darning inverse");
    return base_->cumulative_preimage(Region::F, mass);
}

double darning_map_eval(const DarningMap& dm, double x) { return dm(x); }

DarningImage darning_image(const DarningMap& dm) {
    const auto& set = dm.base();
    DarningImage img;
    img.window_image = {dm(set.window().lo), dm(set.window().hi)};
    const auto comps = set.components();
    img.collapsed.reserve(comps.size());
    for (std::size_t n = 0; n < comps.size(); ++n) {
        img.collapsed.push_back({dm(comps[n].lo), n, comps[n].length()});
    }
    if (set.tails().left == Tail::AllG) img.p_minus = img.window_image.lo;
    if (set.tails().right == Tail::AllG) img.p_plus = img.window_image.hi;
    img.left_unbounded = set.tails().left != Tail::AllG;
    img.right_unbounded = set.tails().right != Tail::AllG;
    return img;
}

SpeedMeasure lebesgue_line_measure(const IntervalSet& set) {
    const auto w = set.window();
    std::vector<Atom> atoms;
    if (auto b = set.unbounded_left_endpoint()) atoms.push_back({*b, kInfiniteMass});
    if (auto a = set.unbounded_right_endpoint()) atoms.push_back({*a, kInfiniteMass});
    return SpeedMeasure::make(w, {{w.lo, w.hi, 1.0}}, std::move(atoms));
}

SpeedMeasure pushforward_speed(const DarningMap& dm, SpeedSource source) {
    const auto& set = dm.base();
    if (source == SpeedSource::Lebesgue) return pushforward_speed(dm, lebesgue_line_measure(set));
    std::vector<DensityPiece> pieces;
    for (const auto& f : set.f_components()) pieces.push_back({f.lo, f.hi, 1.0});
    return pushforward_speed(dm, SpeedMeasure::make(set.window(), std::move(pieces), {}));
}

SpeedMeasure pushforward_speed(const DarningMap& dm, const SpeedMeasure& line_measure) {
    const auto& set = dm.base();
    if (!(line_measure.carrier() == set.window())) {
        throw PreconditionError("pushforward_speed: unsupported source, its carrier must be the window");
    }
    const auto set_pieces = set.pieces();
    std::vector<DensityPiece> out_pieces;
    std::vector<Atom> out_atoms;

    auto push_piece = [&out_pieces](double lo, double hi, double density) {
        if (!(hi > lo)) return;
        if (!out_pieces.empty() && out_pieces.back().hi == lo && out_pieces.back().density == density) {
            out_pieces.back().hi = hi;
        } else {
            out_pieces.push_back({lo, hi, density});
        }
    };

    for (const auto& dp : line_measure.pieces()) {
        if (set_pieces.empty()) break;
        for (std::size_t k = set.piece_index(dp.lo); k < set_pieces.size(); ++k) {
            const auto& sp = set_pieces[k];
            if (sp.lo >= dp.hi) break;
            const double lo = std::max(sp.lo, dp.lo);
            const double hi = std::min(sp.hi, dp.hi);
            if (!(hi > lo)) continue;
            if (sp.region == Region::F) {
                push_piece(dm(lo), dm(hi), dp.density);
            } else {
                out_atoms.push_back({dm(sp.lo), dp.density * (hi - lo)});
            }
        }
    }
    for (const auto& a : line_measure.atoms()) out_atoms.push_back({dm(a.location), a.mass});

    const auto w = set.window();
    return SpeedMeasure::make({dm(w.lo), dm(w.hi)}, std::move(out_pieces), std::move(out_atoms));
}

}  // namespace traceform
