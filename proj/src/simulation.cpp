#include "traceform/simulation.hpp"

#include "traceform/errors.hpp"
#include "traceform/parallel.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace traceform {

namespace {

using Rng = boost::random::mt19937_64;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

struct ExitOutcome {
    bool left;
    double time;
};

ExitOutcome simulate_exit(Interval gap, double x0, double dt, ExitCorrection correction, std::uint64_t seed) {
    const double a = gap.lo;
    const double b = gap.hi;
    if (x0 <= a) return {true, 0.0};
    if (x0 >= b) return {false, 0.0};
    Rng rng(seed);
    boost::random::normal_distribution<double> step(0.0, std::sqrt(dt));
    boost::random::uniform_01<double> unif;
    const bool bridge = correction == ExitCorrection::BrownianBridge;
    double x = x0;
    for (std::uint64_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double y = x + step(rng);
        if (y <= a) return {true, t};
        if (y >= b) return {false, t};
        if (bridge) {
            // Crossing probability of the Brownian bridge from x to y over dt.
            const double ea = 2.0 * (x - a) * (y - a) / dt;
            const double eb = 2.0 * (b - x) * (b - y) / dt;
            if (ea < 40.0 || eb < 40.0) {
                const double pa = ea < 40.0 ? std::exp(-ea) : 0.0;
                const double pb = eb < 40.0 ? std::exp(-eb) : 0.0;
                const double u = unif(rng);
                if (u < pa) return {true, t};
                if (u < pa + pb) return {false, t};
            }
        }
        x = y;
    }
}

std::vector<ExitOutcome> exit_batch(Interval gap, double x0, double dt, const ExitOptions& opts) {
    std::vector<ExitOutcome> out(opts.n);
    parallel_for(opts.n, opts.workers, [&](std::size_t i) {
        out[i] = simulate_exit(gap, x0, dt, opts.correction, path_seed(opts.seed, i));
    });
    return out;
}

void check_gap(Interval gap, double x0, const char* what) {
    if (!(std::isfinite(gap.lo) && std::isfinite(gap.hi) && gap.lo < gap.hi)) {
        throw PreconditionError(std::string(what) + ": the gap must be a bounded nonempty interval");
    }
    if (!gap.contains(x0)) throw PreconditionError(std::string(what) + ": x0 = " + fmt(x0) + " outside the gap");
}

double default_dt(Interval gap, double dt) {
    if (dt > 0.0) return dt;
    const double r = gap.length() / 50.0;
    return r * r;
}

Interval gap_of(const IntervalSet& set, double x0, const char* what) {
    for (const auto& c : set.components()) {
        if (c.lo < x0 && x0 < c.hi) return c;
    }
    throw PreconditionError(std::string(what) + ": x0 = " + fmt(x0) +
                            " lies in F; the start must be inside a bounded component of G");
}

std::vector<double> tent_free_nodes(const SpeedMeasure& speed, double h, std::size_t& n_cells) {
    const auto c = speed.carrier();
    const double len = c.length();
    if (!(h > 0.0)) throw PreconditionError("walk: h must be positive");
    if (!(len > 0.0)) throw PreconditionError("walk: the carrier is a single point");
    const double cells = std::round(len / h);
    if (cells < 1.0 || std::abs(cells * h - len) > 1e-9 * len) {
        throw PreconditionError("walk: h = " + fmt(h) + " does not divide the carrier length " + fmt(len));
    }
    n_cells = static_cast<std::size_t>(cells);
    const double step = len / cells;
    std::vector<double> nodes(n_cells + 1);
    for (std::size_t k = 0; k <= n_cells; ++k) nodes[k] = c.lo + static_cast<double>(k) * step;
    nodes.back() = c.hi;
    return nodes;
}

// Integral of (h - |xi - y|) over xi in [lo, hi], a subinterval of [y - h, y + h].
double tent_integral(double y, double h, double lo, double hi) {
    auto prim = [h](double t) { return h * t - (t < 0 ? -1.0 : 1.0) * 0.5 * t * t; };
    return prim(hi - y) - prim(lo - y);
}

double continuous_tent(const SpeedMeasure& speed, double y, double h, double lo, double hi) {
    double total = 0.0;
    for (const auto& p : speed.pieces()) {
        const double l = std::max({p.lo, lo, y - h});
        const double r = std::min({p.hi, hi, y + h});
        if (r > l) total += p.density * tent_integral(y, h, l, r);
    }
    return total;
}

}  // namespace

EstimatorResult mean_estimate(const std::vector<double>& values, std::string target) {
    EstimatorResult r;
    r.target = std::move(target);
    r.n = values.size();
    if (values.empty()) return r;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    r.estimate = mean;
    if (values.size() > 1) {
        const double var = ss / static_cast<double>(values.size() - 1);
        r.se = std::sqrt(var / static_cast<double>(values.size()));
    }
    return r;
}

std::vector<PathSample> bm_paths(std::size_t n, double dt, double horizon, double x0, std::uint64_t seed,
                                 unsigned workers) {
    if (!(dt > 0.0)) throw PreconditionError("bm_paths: dt must be positive");
    if (!(horizon >= 0.0)) throw PreconditionError("bm_paths: horizon must be nonnegative");
    const auto full = static_cast<std::size_t>(std::floor(horizon / dt));
    std::vector<PathSample> out(n);
    parallel_for(n, workers, [&](std::size_t i) {
        PathSample p;
        p.seed = path_seed(seed, i);
        Rng rng(p.seed);
        boost::random::normal_distribution<double> normal(0.0, 1.0);
        p.times.push_back(0.0);
        p.states.push_back(x0);
        double x = x0;
        for (std::size_t k = 1; k <= full; ++k) {
            x += std::sqrt(dt) * normal(rng);
            p.times.push_back(static_cast<double>(k) * dt);
            p.states.push_back(x);
        }
        const double last = static_cast<double>(full) * dt;
        if (horizon > last) {
            x += std::sqrt(horizon - last) * normal(rng);
            p.times.push_back(horizon);
            p.states.push_back(x);
        }
        p.flags.assign(p.times.size(), kFlagNone);
        out[i] = std::move(p);
    });
    return out;
}

HittingEstimate estimate_hitting(Interval gap, double x0, const ExitOptions& opts) {
    check_gap(gap, x0, "estimate_hitting");
    HittingEstimate est;
    est.dt = default_dt(gap, opts.dt);
    const auto outcomes = exit_batch(gap, x0, est.dt, opts);
    std::vector<double> left(outcomes.size());
    std::vector<double> right(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        left[i] = outcomes[i].left ? 1.0 : 0.0;
        right[i] = 1.0 - left[i];
    }
    est.left = mean_estimate(left, "P(exit at " + fmt(gap.lo) + ")");
    est.right = mean_estimate(right, "P(exit at " + fmt(gap.hi) + ")");
    return est;
}

HittingEstimate estimate_hitting(const IntervalSet& set, double x0, const ExitOptions& opts) {
    return estimate_hitting(gap_of(set, x0, "estimate_hitting"), x0, opts);
}

LaplaceEstimate estimate_laplace(Interval gap, double x0, double alpha, const ExitOptions& opts) {
    check_gap(gap, x0, "estimate_laplace");
    if (!(alpha >= 0.0)) throw PreconditionError("estimate_laplace: alpha must be nonnegative");
    LaplaceEstimate est;
    est.dt_coarse = default_dt(gap, opts.dt);
    est.dt_fine = est.dt_coarse / 4.0;
    auto run = [&](double dt, EstimatorResult& l, EstimatorResult& r) {
        const auto outcomes = exit_batch(gap, x0, dt, opts);
        std::vector<double> lv(outcomes.size());
        std::vector<double> rv(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const double disc = std::exp(-alpha * outcomes[i].time);
            lv[i] = outcomes[i].left ? disc : 0.0;
            rv[i] = outcomes[i].left ? 0.0 : disc;
        }
        l = mean_estimate(lv, "E[exp(-alpha sigma); exit at " + fmt(gap.lo) + "]");
        r = mean_estimate(rv, "E[exp(-alpha sigma); exit at " + fmt(gap.hi) + "]");
    };
    run(est.dt_coarse, est.left_coarse, est.right_coarse);
    run(est.dt_fine, est.left, est.right);
    est.bias_band_left = std::abs(est.left_coarse.estimate - est.left.estimate);
    est.bias_band_right = std::abs(est.right_coarse.estimate - est.right.estimate);
    return est;
}

LaplaceEstimate estimate_laplace(const IntervalSet& set, double x0, double alpha, const ExitOptions& opts) {
    return estimate_laplace(gap_of(set, x0, "estimate_laplace"), x0, alpha, opts);
}

std::size_t WalkChain::nearest(double y) const {
    if (y <= nodes.front()) return 0;
    if (y >= nodes.back()) return nodes.size() - 1;
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), y);
    const auto k = static_cast<std::size_t>(it - nodes.begin());
    return (y - nodes[k - 1] <= nodes[k] - y) ? k - 1 : k;
}

WalkChain build_walk_chain(const SpeedMeasure& speed, const WalkOptions& opts) {
    WalkChain chain;
    std::size_t cells = 0;
    chain.nodes = tent_free_nodes(speed, opts.h, cells);
    chain.h = speed.carrier().length() / static_cast<double>(cells);
    chain.left = opts.left;
    chain.right = opts.right;
    const std::size_t n = chain.nodes.size();
    const double h = chain.h;
    chain.hold_mean.assign(n, 0.0);
    chain.absorbing.assign(n, 0);
    chain.atom_mass.assign(n, 0.0);
    chain.atom_source.assign(n, std::nullopt);

    for (const auto& a : speed.atoms()) {
        const std::size_t k = chain.nearest(a.location);
        if (chain.atom_source[k]) {
            throw PreconditionError("walk: atoms at " + fmt(*chain.atom_source[k]) + " and " + fmt(a.location) +
                                    " snap to the same node; h = " + fmt(opts.h) +
                                    " exceeds the smallest atom spacing");
        }
        chain.atom_source[k] = a.location;
        if (a.infinite()) {
            chain.absorbing[k] = 1;
        } else {
            chain.atom_mass[k] = a.mass;
        }
    }
    if (opts.left == Boundary::Absorb) chain.absorbing.front() = 1;
    if (opts.right == Boundary::Absorb) chain.absorbing.back() = 1;

    for (std::size_t k = 0; k < n; ++k) {
        const double y = chain.nodes[k];
        if (k == 0) {
            chain.hold_mean[k] = 2.0 * (continuous_tent(speed, y, h, y, y + h) + h * chain.atom_mass[k]);
        } else if (k + 1 == n) {
            chain.hold_mean[k] = 2.0 * (continuous_tent(speed, y, h, y - h, y) + h * chain.atom_mass[k]);
        } else {
            chain.hold_mean[k] = continuous_tent(speed, y, h, y - h, y + h) + h * chain.atom_mass[k];
        }
    }
    return chain;
}

std::optional<double> run_walk(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                               Holding holding, const WalkVisitor& visit) {
    if (!(horizon >= 0.0)) throw PreconditionError("walk: horizon must be nonnegative");
    const auto& nodes = chain.nodes;
    if (x0 < nodes.front() || x0 > nodes.back()) {
        throw PreconditionError("walk: x0 = " + fmt(x0) + " outside the carrier");
    }
    Rng rng(seed);
    boost::random::exponential_distribution<double> expo(1.0);
    const std::size_t last = nodes.size() - 1;
    std::size_t k = chain.nearest(x0);
    double t = 0.0;
    while (t < horizon) {
        if (chain.absorbing[k]) {
            visit(k, t, horizon - t);
            return t;
        }
        const double mean = chain.hold_mean[k];
        const double d = holding == Holding::Exponential ? mean * expo(rng) : mean;
        const double dur = std::min(d, horizon - t);
        if (!visit(k, t, dur)) return std::nullopt;
        t += d;
        if (last == 0) continue;
        if (k == 0) {
            k = 1;
        } else if (k == last) {
            k = last - 1;
        } else {
            k = (rng() >> 63) ? k + 1 : k - 1;
        }
    }
    return std::nullopt;
}

PathSample walk_paths(const WalkChain& chain, double x0, double horizon, std::uint64_t seed, Holding holding) {
    PathSample p;
    p.seed = seed;
    auto push = [&p](double t, double x, std::uint8_t flag) {
        if (!p.times.empty() && p.times.back() == t) {
            p.states.back() = x;
            p.flags.back() = flag;
            return;
        }
        p.times.push_back(t);
        p.states.push_back(x);
        p.flags.push_back(flag);
    };
    p.absorbed_at = run_walk(chain, x0, horizon, seed, holding, [&](std::size_t k, double t, double) {
        push(t, chain.nodes[k], chain.absorbing[k] ? kFlagAbsorbed : kFlagNone);
        return true;
    });
    if (p.times.empty()) push(0.0, chain.nodes[chain.nearest(x0)], kFlagNone);
    if (p.times.back() < horizon) {
        p.times.push_back(horizon);
        p.states.push_back(p.states.back());
        p.flags.push_back(p.flags.back());
    }
    return p;
}

PathSample walk_paths(const SpeedMeasure& speed, const WalkOptions& opts, double x0, double horizon,
                      std::uint64_t seed) {
    return walk_paths(build_walk_chain(speed, opts), x0, horizon, seed, opts.holding);
}

OccupationAccumulator::OccupationAccumulator(std::vector<OccupationTarget> targets, double burn_in, double horizon,
                                             std::size_t batches)
    : targets_(std::move(targets)), burn_in_(burn_in), horizon_(horizon), batches_(std::max<std::size_t>(batches, 2)) {
    if (!(horizon_ > burn_in_) || burn_in_ < 0.0) {
        throw PreconditionError("occupation: the horizon must exceed the burn-in");
    }
    time_in_.assign(targets_.size(), std::vector<double>(batches_, 0.0));
}

void OccupationAccumulator::add(double t, double duration, double x) {
    const double lo = std::max(t, burn_in_);
    const double hi = std::min(t + duration, horizon_);
    if (!(hi > lo)) return;
    const double width = (horizon_ - burn_in_) / static_cast<double>(batches_);
    for (std::size_t j = 0; j < targets_.size(); ++j) {
        if (!targets_[j].region.contains(x)) continue;
        auto b = static_cast<std::size_t>((lo - burn_in_) / width);
        double s = lo;
        while (s < hi && b < batches_) {
            const double edge = (b + 1 == batches_) ? horizon_ : burn_in_ + static_cast<double>(b + 1) * width;
            const double e = std::min(hi, edge);
            if (e > s) time_in_[j][b] += e - s;
            s = e;
            ++b;
        }
    }
}

std::vector<EstimatorResult> OccupationAccumulator::results() const {
    const double width = (horizon_ - burn_in_) / static_cast<double>(batches_);
    std::vector<EstimatorResult> out;
    for (std::size_t j = 0; j < targets_.size(); ++j) {
        std::vector<double> fractions(batches_);
        for (std::size_t b = 0; b < batches_; ++b) fractions[b] = time_in_[j][b] / width;
        auto r = mean_estimate(fractions, targets_[j].label);
        r.note = "batch means over " + std::to_string(batches_) + " batches";
        if (horizon_ < 10.0 * burn_in_) {
            r.warning = true;
            r.note += "; horizon shorter than 10 x burn-in";
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<EstimatorResult> occupation_fractions(const PathSample& path, const std::vector<OccupationTarget>& targets,
                                                  double burn_in, std::size_t batches) {
    if (path.times.empty()) throw PreconditionError("occupation: empty path");
    OccupationAccumulator acc(targets, burn_in, path.times.back(), batches);
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        acc.add(path.times[i], path.times[i + 1] - path.times[i], path.states[i]);
    }
    return acc.results();
}

std::vector<EstimatorResult> walk_occupation(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                                             Holding holding, const std::vector<OccupationTarget>& targets,
                                             double burn_in, std::size_t batches) {
    OccupationAccumulator acc(targets, burn_in, horizon, batches);
    run_walk(chain, x0, horizon, seed, holding, [&](std::size_t k, double t, double d) {
        acc.add(t, d, chain.nodes[k]);
        return true;
    });
    return acc.results();
}

ReplicaOccupation walk_occupation_replicas(const WalkChain& chain, double x0, double horizon, std::uint64_t seed,
                                           std::size_t replicas, Holding holding,
                                           const std::vector<OccupationTarget>& targets, double burn_in,
                                           unsigned workers) {
    ReplicaOccupation out;
    out.replicas.resize(replicas);
    parallel_for(replicas, workers, [&](std::size_t r) {
        out.replicas[r] = walk_occupation(chain, x0, horizon, path_seed(seed, r), holding, targets, burn_in);
    });
    for (std::size_t j = 0; j < targets.size(); ++j) {
        std::vector<double> means(replicas);
        for (std::size_t r = 0; r < replicas; ++r) means[r] = out.replicas[r][j].estimate;
        auto pooled = mean_estimate(means, targets[j].label);
        pooled.note = "mean over " + std::to_string(replicas) + " replicas";
        out.pooled.push_back(std::move(pooled));
    }
    return out;
}

SpeedMeasure scale_speed_measure(const ScaleFunction& sf) {
    const auto& set = sf.base();
    const auto w = set.window();
    const Interval carrier{sf(w.lo), sf(w.hi)};
    if (!(carrier.hi > carrier.lo)) {
        throw PreconditionError("simulate_xs: G has no mass in the window, so s collapses the window to a point");
    }
    std::vector<DensityPiece> pieces;
    std::vector<Atom> atoms;
    for (const auto& p : set.pieces()) {
        if (p.region == Region::G) {
            pieces.push_back({sf(p.lo), sf(p.hi), 1.0});
        } else {
            atoms.push_back({sf(p.lo), p.hi - p.lo});
        }
    }
    return SpeedMeasure::make(carrier, std::move(pieces), std::move(atoms));
}

SpeedMeasure darning_speed_measure(const DarningImage& image) {
    const auto c = image.window_image;
    std::vector<Atom> atoms;
    for (const auto& p : image.collapsed) atoms.push_back({p.location, p.width});
    if (image.p_minus) atoms.push_back({*image.p_minus, kInfiniteMass});
    if (image.p_plus) atoms.push_back({*image.p_plus, kInfiniteMass});
    return SpeedMeasure::make(c, {{c.lo, c.hi, 1.0}}, std::move(atoms));
}

PathSample simulate_xs(const ScaleFunction& sf, const WalkOptions& opts, double x0, double horizon,
                       std::uint64_t seed) {
    const auto& set = sf.base();
    if (!set.window().contains(x0)) throw PreconditionError("simulate_xs: x0 outside the window");
    const auto chain = build_walk_chain(scale_speed_measure(sf), opts);
    auto path = walk_paths(chain, sf(x0), horizon, seed, opts.holding);
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        const std::size_t k = chain.nearest(path.states[i]);
        const double y = chain.atom_source[k].value_or(path.states[i]);
        const Interval pre = sf.inverse(std::clamp(y, sf(set.window().lo), sf(set.window().hi)));
        path.states[i] = 0.5 * (pre.lo + pre.hi);
        if (pre.hi > pre.lo) path.flags[i] |= kFlagCollapsed;
    }
    return path;
}

PathSample simulate_darning_line(const DarningMap& dm, const WalkOptions& opts, double x0, double horizon,
                                 std::uint64_t seed) {
    const auto& set = dm.base();
    if (!set.window().contains(x0)) throw PreconditionError("simulate_darning_line: x0 outside the window");
    const auto speed = pushforward_speed(dm, lebesgue_line_measure(set));
    const auto chain = build_walk_chain(speed, opts);
    auto path = walk_paths(chain, dm(x0), horizon, seed, opts.holding);
    const Interval image{dm(set.window().lo), dm(set.window().hi)};
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        const std::size_t k = chain.nearest(path.states[i]);
        const double y = chain.atom_source[k].value_or(path.states[i]);
        const Interval pre = dm.inverse(std::clamp(y, image.lo, image.hi));
        path.states[i] = 0.5 * (pre.lo + pre.hi);
        if (pre.hi > pre.lo) path.flags[i] |= kFlagCollapsed;
    }
    return path;
}

}  // namespace traceform
