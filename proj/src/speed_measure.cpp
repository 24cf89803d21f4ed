#include "traceform/speed_measure.hpp"

#include "traceform/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace traceform {

SpeedMeasure SpeedMeasure::make(Interval carrier, std::vector<DensityPiece> pieces, std::vector<Atom> atoms) {
    if (!(carrier.lo <= carrier.hi) || !std::isfinite(carrier.lo) || !std::isfinite(carrier.hi)) {
        throw ValidationError("speed measure: carrier must be a finite interval with lo <= hi");
    }
    std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (!(p.lo <= p.hi) || p.lo < carrier.lo || p.hi > carrier.hi) {
            throw ValidationError("speed measure: density piece outside the carrier");
        }
        if (!(p.density >= 0.0) || !std::isfinite(p.density)) {
            throw ValidationError("speed measure: density must be finite and nonnegative");
        }
        if (i > 0 && pieces[i - 1].hi > p.lo) {
            throw ValidationError("speed measure: density pieces overlap");
        }
    }
    pieces.erase(std::remove_if(pieces.begin(), pieces.end(),
                                [](const auto& p) { return p.hi == p.lo || p.density == 0.0; }),
                 pieces.end());

    std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.location < b.location; });
    std::vector<Atom> merged;
    for (const auto& a : atoms) {
        if (!(a.mass > 0.0)) throw ValidationError("speed measure: atom masses must be positive");
        if (!carrier.contains(a.location)) {
            throw ValidationError("speed measure: atom at " + std::to_string(a.location) + " outside the carrier");
        }
        if (!merged.empty() && merged.back().location == a.location) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }

    SpeedMeasure m;
    m.carrier_ = carrier;
    m.pieces_ = std::move(pieces);
    m.atoms_ = std::move(merged);
    return m;
}

double SpeedMeasure::continuous_mass(Interval closed) const {
    double total = 0.0;
    for (const auto& p : pieces_) {
        const double lo = std::max(p.lo, closed.lo);
        const double hi = std::min(p.hi, closed.hi);
        if (hi > lo) total += (hi - lo) * p.density;
    }
    return total;
}

double SpeedMeasure::mass(Interval closed) const {
    double total = continuous_mass(closed);
    for (const auto& a : atoms_) {
        if (closed.contains(a.location)) total += a.mass;
    }
    return total;
}

double SpeedMeasure::density_at(double x) const {
    for (const auto& p : pieces_) {
        if (p.lo <= x && x < p.hi) return p.density;
    }
    return 0.0;
}

}  // namespace traceform
