#pragma once

#include "traceform/interval_set.hpp"

#include <limits>
#include <span>
#include <vector>

namespace traceform {

inline constexpr double kInfiniteMass = std::numeric_limits<double>::infinity();

struct DensityPiece {
    double lo;
    double hi;
    double density;
};

/// A point mass. An infinite mass marks an absorbing point.
struct Atom {
    double location;
    double mass;

    bool infinite() const { return mass == kInfiniteMass; }
};

/// Piecewise-constant density plus atoms on a carrier interval.
class SpeedMeasure {
public:
    /// Sorts pieces and atoms, merges atoms at identical locations and validates:
    /// pieces inside the carrier and non-overlapping, densities >= 0, atom masses in (0, inf].
    static SpeedMeasure make(Interval carrier, std::vector<DensityPiece> pieces, std::vector<Atom> atoms);

    const Interval& carrier() const { return carrier_; }
    std::span<const DensityPiece> pieces() const { return pieces_; }
    std::span<const Atom> atoms() const { return atoms_; }

    /// Mass of the closed interval [lo, hi]; +inf when it holds an infinite atom.
    double mass(Interval closed) const;
    double total_mass() const { return mass(carrier_); }
    /// Mass of the density part only, over [lo, hi].
    double continuous_mass(Interval closed) const;
    double density_at(double x) const;

private:
    Interval carrier_;
    std::vector<DensityPiece> pieces_;
    std::vector<Atom> atoms_;
};

}  // namespace traceform
