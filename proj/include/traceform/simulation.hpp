#pragma once

#include "traceform/interval_set.hpp"
#include "traceform/scale.hpp"
#include "traceform/speed_measure.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace traceform {

enum PathFlag : std::uint8_t {
    kFlagNone = 0,
    kFlagCollapsed = 1,  ///< state stands for a collapsed interval (reported at its midpoint)
    kFlagAbsorbed = 2,
};

/// A piecewise-constant trajectory: states[i] is held on [times[i], times[i+1]).
/// The last entry is at the horizon.
struct PathSample {
    std::vector<double> times;
    std::vector<double> states;
    std::vector<std::uint8_t> flags;
    std::optional<double> absorbed_at;
    std::uint64_t seed = 0;
};

struct EstimatorResult {
    double estimate = 0.0;
    double se = 0.0;
    std::size_t n = 0;
    std::string target;
    bool warning = false;
    std::string note;
};

/// Mean and standard error (sample std / sqrt(n)) of values summed in index order.
EstimatorResult mean_estimate(const std::vector<double>& values, std::string target);

// ---- Brownian motion -------------------------------------------------------------------

/// n paths of standard Brownian motion (variance t) sampled every dt up to the horizon.
std::vector<PathSample> bm_paths(std::size_t n, double dt, double horizon, double x0, std::uint64_t seed,
                                 unsigned workers = 1);

enum class ExitCorrection {
    None,           ///< exit detected only when a sampled point leaves the gap
    BrownianBridge  ///< also tests each step for a bridge crossing between the samples
};

struct ExitOptions {
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    /// Time step; 0 picks (gap / 50)^2.
    double dt = 0.0;
    unsigned workers = 1;
    ExitCorrection correction = ExitCorrection::None;
};

struct HittingEstimate {
    EstimatorResult left;   ///< P(exit at a)
    EstimatorResult right;  ///< P(exit at b)
    double dt = 0.0;
};

/// Exit side of discretized Brownian motion started at x0 in the gap (a, b).
HittingEstimate estimate_hitting(Interval gap, double x0, const ExitOptions& opts);
/// x0 must lie in a bounded component of G.
HittingEstimate estimate_hitting(const IntervalSet& set, double x0, const ExitOptions& opts);

struct LaplaceEstimate {
    EstimatorResult left;  ///< E[exp(-alpha sigma); exit at a] at step dt/4
    EstimatorResult right;
    EstimatorResult left_coarse;  ///< same at step dt
    EstimatorResult right_coarse;
    double dt_coarse = 0.0;
    double dt_fine = 0.0;
    /// |coarse - fine|: the first-order discretization band of the fine estimate.
    double bias_band_left = 0.0;
    double bias_band_right = 0.0;
};

LaplaceEstimate estimate_laplace(Interval gap, double x0, double alpha, const ExitOptions& opts);
LaplaceEstimate estimate_laplace(const IntervalSet& set, double x0, double alpha, const ExitOptions& opts);

// ---- Random-walk diffusions ------------------------------------------------------------

enum class Boundary { Reflect, Absorb };
enum class Holding { Exponential, Deterministic };

struct WalkOptions {
    double h = 0.01;
    Boundary left = Boundary::Reflect;
    Boundary right = Boundary::Reflect;
    Holding holding = Holding::Exponential;
};

/// Nearest-neighbour walk on an h-grid of the carrier in natural scale.
struct WalkChain {
    std::vector<double> nodes;
    /// Mean holding time: integral of (h - |xi - y|)^+ against the speed measure, doubled
    /// one-sided integral at a reflecting end.
    std::vector<double> hold_mean;
    std::vector<std::uint8_t> absorbing;
    /// Finite atom mass snapped onto each node (0 if none).
    std::vector<double> atom_mass;
    /// Original location of the atom snapped onto each node, if any.
    std::vector<std::optional<double>> atom_source;
    Boundary left = Boundary::Reflect;
    Boundary right = Boundary::Reflect;
    double h = 0.0;

    /// Index of the node nearest to y.
    std::size_t nearest(double y) const;
};

/// Throws PreconditionError when h does not divide the carrier or two atoms snap to one node.
WalkChain build_walk_chain(const SpeedMeasure& speed, const WalkOptions& opts);

/// Visitor receives (node index, entry time, holding duration); returning false stops the walk.
using WalkVisitor = std::function<bool(std::size_t, double, double)>;

/// Runs one walk up to the horizon without storing it. Returns the absorption time, if any.
std::optional<double> run_walk(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                               Holding holding, const WalkVisitor& visit);

PathSample walk_paths(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                      Holding holding = Holding::Exponential);
PathSample walk_paths(const SpeedMeasure& speed, const WalkOptions& opts, double x0, double horizon,
                      std::uint64_t seed);

// ---- Occupation -----------------------------------------------------------------------

struct OccupationTarget {
    Interval region;  ///< closed; use [p - h/2, p + h/2] for an atom snapped to a node
    std::string label;
};

/// Time-weighted fractions over [burn_in, horizon] with batch-means standard errors.
class OccupationAccumulator {
public:
    OccupationAccumulator(std::vector<OccupationTarget> targets, double burn_in, double horizon,
                          std::size_t batches = 20);

    /// State `x` held on [t, t + duration).
    void add(double t, double duration, double x);
    std::vector<EstimatorResult> results() const;

private:
    std::vector<OccupationTarget> targets_;
    double burn_in_;
    double horizon_;
    std::size_t batches_;
    std::vector<std::vector<double>> time_in_;  // [target][batch]
};

std::vector<EstimatorResult> occupation_fractions(const PathSample& path, const std::vector<OccupationTarget>& targets,
                                                  double burn_in, std::size_t batches = 20);

/// Streaming occupation of a walk; states are node positions in natural scale.
std::vector<EstimatorResult> walk_occupation(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                                             Holding holding, const std::vector<OccupationTarget>& targets,
                                             double burn_in, std::size_t batches = 20);

/// Independent replicas seeded by path_seed(seed, r); the pooled result per target is the
/// replica mean with standard error sd / sqrt(replicas).
struct ReplicaOccupation {
    std::vector<std::vector<EstimatorResult>> replicas;
    std::vector<EstimatorResult> pooled;
};
ReplicaOccupation walk_occupation_replicas(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                                           std::size_t replicas, Holding holding,
                                           const std::vector<OccupationTarget>& targets, double burn_in,
                                           unsigned workers = 1);

// ---- Processes built from a set --------------------------------------------------------

/// Image of Lebesgue measure on the window under s: density 1 on s(G), an atom of mass
/// m(F-run) at the image of each F-run.
SpeedMeasure scale_speed_measure(const ScaleFunction& sf);

/// m_j assembled from the darning image: density 1, atoms d_n at p*_n, infinite atoms at p*_-, p*_+.
SpeedMeasure darning_speed_measure(const DarningImage& image);

/// The subspace diffusion: a walk in y = s(x) with speed scale_speed_measure, reported in x.
/// Collapsed F-runs are reported at their midpoints with kFlagCollapsed.
PathSample simulate_xs(const ScaleFunction& sf, const WalkOptions& opts, double x0, double horizon,
                       std::uint64_t seed);

/// The darning process reached from the line: speed is the pushforward of the line measure
/// (with infinite atoms for AllG tails), states are reported on the line.
PathSample simulate_darning_line(const DarningMap& dm, const WalkOptions& opts, double x0, double horizon,
                                 std::uint64_t seed);

}  // namespace traceform
