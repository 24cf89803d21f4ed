#include "generators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

using namespace traceform;
using tfgen::share;

namespace {

ExitOptions exit_opts(std::size_t n, std::uint64_t seed, unsigned workers = 1) {
    ExitOptions o;
    o.n = n;
    o.seed = seed;
    o.workers = workers;
    o.correction = ExitCorrection::BrownianBridge;
    return o;
}

// Time-weighted stationary law of the nearest-neighbour walk, computed from scratch:
// holding means by quadrature of the tent against the density plus h times each atom,
// embedded-chain weights by lazy power iteration.
std::vector<double> stationary_oracle(const SpeedMeasure& speed, double h) {
    const auto c = speed.carrier();
    const auto n = static_cast<std::size_t>(std::llround(c.length() / h)) + 1;
    const double step = c.length() / static_cast<double>(n - 1);
    std::vector<double> nodes(n);
    for (std::size_t k = 0; k < n; ++k) nodes[k] = c.lo + step * static_cast<double>(k);
    std::vector<double> hold(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = nodes[k];
        const double lo = k == 0 ? y : y - step;
        const double hi = k + 1 == n ? y : y + step;
        double v = 0.0;
        for (const auto& p : speed.pieces()) {
            const double l = std::max(p.lo, lo);
            const double r = std::min(p.hi, hi);
            if (r <= l) continue;
            auto tent = [&](double xi) { return p.density * (step - std::abs(xi - y)); };
            // Split at y so each piece of the integrand is linear.
            if (l < y && y < r) {
                v += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(tent, l, y, 0, 1e-15);
                v += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(tent, y, r, 0, 1e-15);
            } else {
                v += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(tent, l, r, 0, 1e-15);
            }
        }
        for (const auto& a : speed.atoms()) {
            if (std::abs(a.location - y) <= step / 2) v += step * a.mass;
        }
        hold[k] = (k == 0 || k + 1 == n) ? 2.0 * v : v;
    }
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (int it = 0; it < 200000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            next[k] += 0.5 * pi[k];
            if (k == 0) {
                next[1] += 0.5 * pi[k];
            } else if (k + 1 == n) {
                next[n - 2] += 0.5 * pi[k];
            } else {
                next[k - 1] += 0.25 * pi[k];
                next[k + 1] += 0.25 * pi[k];
            }
        }
        double diff = 0.0;
        for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs(next[k] - pi[k]));
        pi.swap(next);
        if (diff < 1e-15) break;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        pi[k] *= hold[k];
        total += pi[k];
    }
    for (double& p : pi) p /= total;
    return pi;
}

double oracle_fraction(const std::vector<double>& pi, const SpeedMeasure& speed, Interval target) {
    const auto c = speed.carrier();
    const double step = c.length() / static_cast<double>(pi.size() - 1);
    double f = 0.0;
    for (std::size_t k = 0; k < pi.size(); ++k) {
        if (target.contains(c.lo + step * static_cast<double>(k))) f += pi[k];
    }
    return f;
}

bool within(double est, double se, double target, double sigmas = 3.0, double band = 0.0) {
    return std::abs(est - target) <= sigmas * se + band;
}

}  // namespace

TEST_CASE("bm_paths: increments, horizon 0 and seeds") {
    const double dt = 1e-3;
    const auto p = bm_paths(1, dt, 100.0, 0.0, 5)[0];
    REQUIRE(p.states.size() == 100001);
    double ss = 0.0;
    for (std::size_t i = 1; i < p.states.size(); ++i) {
        const double d = p.states[i] - p.states[i - 1];
        ss += d * d;
    }
    const double n = static_cast<double>(p.states.size() - 1);
    const double var = ss / n;
    CHECK(within(var, dt * std::sqrt(2.0 / n), dt));

    const auto zero = bm_paths(3, 0.01, 0.0, 0.7, 1);
    for (const auto& z : zero) {
        CHECK(z.times.size() == 1);
        CHECK(z.states[0] == 0.7);
    }

    const auto a = bm_paths(4, 0.01, 1.0, 0.0, 99, 1);
    const auto b = bm_paths(4, 0.01, 1.0, 0.0, 99, 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].states == b[i].states);
    CHECK(bm_paths(1, 0.01, 1.0, 0.0, 100)[0].states != a[0].states);
}

TEST_CASE("estimate_hitting examples") {
    const auto e = estimate_hitting({0.0, 1.0}, 0.25, exit_opts(100000, 7));
    const double bound = 3.0 * std::sqrt(0.75 * 0.25 / 1e5);
    CHECK(std::abs(e.left.estimate - 0.75) <= bound);
    CHECK(e.left.estimate + e.right.estimate == 1.0);

    const auto mid = estimate_hitting({2.0, 3.0}, 2.5, exit_opts(100000, 8));
    CHECK(within(mid.left.estimate, mid.left.se, 0.5));

    const auto edge = estimate_hitting({0.0, 1.0}, 1e-4, exit_opts(20000, 9));
    CHECK(edge.left.estimate >= 0.995);
    CHECK(estimate_hitting({0.0, 1.0}, 0.0, exit_opts(100, 9)).left.estimate == 1.0);

    const auto set = share(svc_complement(1, {0.0, 1.0}));
    CHECK_THROWS_AS(estimate_hitting(*set, 0.2, exit_opts(10, 1)), PreconditionError);
    const auto in_set = estimate_hitting(*set, 0.4375, exit_opts(100000, 10));
    CHECK(within(in_set.left.estimate, in_set.left.se, (0.625 - 0.4375) / 0.25));
}

TEST_CASE("estimate_laplace examples") {
    const auto l = estimate_laplace({0.0, 1.0}, 0.5, 2.0, exit_opts(100000, 11));
    const double closed = std::sinh(1.0) / std::sinh(2.0);
    CHECK(within(l.left.estimate, l.left.se, closed, 3.0, l.bias_band_left));
    CHECK(within(l.right.estimate, l.right.se, closed, 3.0, l.bias_band_right));

    // alpha = 0 reproduces the hitting estimate at the fine step with the same seed.
    const auto l0 = estimate_laplace({0.0, 1.0}, 0.3, 0.0, exit_opts(20000, 12));
    auto o = exit_opts(20000, 12);
    o.dt = l0.dt_fine;
    const auto h = estimate_hitting({0.0, 1.0}, 0.3, o);
    CHECK(l0.left.estimate == h.left.estimate);

    const auto big = estimate_laplace({0.0, 1.0}, 0.5, 1000.0, exit_opts(5000, 13));
    CHECK(alpha_hitting({0.0, 1.0}, 1000.0, 0.5).p < 1e-6);
    CHECK(big.left.estimate < 1e-6);
    CHECK(big.right.estimate < 1e-6);
}

TEST_CASE("discretization: coarse and fine Laplace estimates agree within 3 sigma") {
    for (double alpha : {0.5, 2.0, 10.0}) {
        const auto l = estimate_laplace({0.0, 1.0}, 0.3, alpha, exit_opts(20000, 14));
        const double joint = std::hypot(l.left.se, l.left_coarse.se);
        CHECK(l.bias_band_left <= 3.0 * joint);
    }
}

TEST_CASE("walk chain on Lebesgue measure") {
    const auto speed = SpeedMeasure::make({0.0, 1.0}, {{0.0, 1.0, 1.0}}, {});
    WalkOptions opts;
    opts.h = 0.01;
    const auto chain = build_walk_chain(speed, opts);
    CHECK(chain.nodes.size() == 101);
    for (std::size_t k = 1; k + 1 < chain.nodes.size(); ++k) {
        CHECK(chain.hold_mean[k] == doctest::Approx(opts.h * opts.h).epsilon(1e-12));
    }

    const std::vector<OccupationTarget> quarters{
        {{0.0, 0.245}, "q1"}, {{0.255, 0.495}, "q2"}, {{0.505, 0.745}, "q3"}, {{0.755, 1.0}, "q4"}};
    const auto res = walk_occupation_replicas(chain, 0.5, 1000.0, 21, 8, Holding::Exponential, quarters, 10.0, 1);
    const auto pi = stationary_oracle(speed, opts.h);
    for (std::size_t i = 0; i < quarters.size(); ++i) {
        const double oracle = oracle_fraction(pi, speed, quarters[i].region);
        CHECK(within(res.pooled[i].estimate, res.pooled[i].se, oracle));
        CHECK(std::abs(res.pooled[i].estimate - 0.25) <= 0.05 * 0.25);
    }

    const std::vector<OccupationTarget> half{{{0.0, 0.5}, "[0, 1/2]"}};
    const auto r = walk_occupation(chain, 0.3, 1000.0, 22, Holding::Exponential, half, 10.0);
    CHECK(within(r[0].estimate, r[0].se, 0.5, 3.0, opts.h / 2));
}

TEST_CASE("walk chain rejects bad grids") {
    const auto speed = SpeedMeasure::make({0.0, 1.0}, {{0.0, 1.0, 1.0}}, {{0.5, 0.1}, {0.501, 0.1}});
    WalkOptions opts;
    opts.h = 0.3;
    CHECK_THROWS_AS(build_walk_chain(speed, opts), PreconditionError);
    opts.h = 0.01;
    CHECK_THROWS_AS(build_walk_chain(speed, opts), PreconditionError);
}

TEST_CASE("sticky atom: occupation of the darned depth-1 image") {
    const auto speed = SpeedMeasure::make({0.0, 0.75}, {{0.0, 0.75, 1.0}}, {{0.375, 0.25}});
    WalkOptions opts;
    opts.h = 0.005;
    const auto chain = build_walk_chain(speed, opts);
    const std::vector<OccupationTarget> atom{{{0.375 - opts.h / 2, 0.375 + opts.h / 2}, "atom"}};
    const auto rep = walk_occupation_replicas(chain, 0.2, 1000.0, 31, 4, Holding::Exponential, atom, 10.0, 2);
    const auto pi = stationary_oracle(speed, opts.h);
    const double oracle = oracle_fraction(pi, speed, atom[0].region);
    // The discrete oracle carries the h-wide density cell around the atom: (1/4 + h) / 1.
    CHECK(oracle == doctest::Approx(0.25 + opts.h).epsilon(1e-9));
    CHECK(within(rep.pooled[0].estimate, rep.pooled[0].se, oracle));
    CHECK(std::abs(rep.pooled[0].estimate - 0.25) <= 0.05 * 0.25);
}

TEST_CASE("infinite atom at the right end absorbs every path") {
    const auto speed = SpeedMeasure::make({0.0, 1.0}, {{0.0, 1.0, 1.0}}, {{1.0, kInfiniteMass}});
    WalkOptions opts;
    opts.h = 0.05;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = walk_paths(speed, opts, 0.5, 200.0, seed);
        REQUIRE(p.absorbed_at);
        CHECK(p.states.back() == 1.0);
        CHECK(p.flags.back() == kFlagAbsorbed);
        const std::vector<OccupationTarget> end{{{1.0, 1.0}, "absorbing end"}};
        const double short_run = occupation_fractions(p, end, 0.0)[0].estimate;
        const auto longer = walk_paths(speed, opts, 0.5, 2000.0, seed);
        CHECK(occupation_fractions(longer, end, 0.0)[0].estimate >= short_run);
    }
    const auto late = walk_paths(speed, opts, 0.5, 1e5, 3);
    const std::vector<OccupationTarget> end{{{1.0, 1.0}, "absorbing end"}};
    CHECK(occupation_fractions(late, end, 0.0)[0].estimate > 0.99);
}

TEST_CASE("simulate_xs: time in F matches m(F) and collapsed windows are rejected") {
    const auto set = share(svc_complement(1, {0.0, 1.0}));
    ScaleFunction sf(set);
    WalkOptions opts;
    opts.h = 0.005;
    const auto speed = scale_speed_measure(sf);
    CHECK(speed.total_mass() == 1.0);
    const auto chain = build_walk_chain(speed, opts);
    const std::vector<OccupationTarget> ends{{{0.0, opts.h / 2}, "s(F-run 1)"},
                                             {{0.25 - opts.h / 2, 0.25}, "s(F-run 2)"}};
    const auto rep = walk_occupation_replicas(chain, sf(0.5), 200.0, 41, 8, Holding::Exponential, ends, 5.0, 2);
    const double f = rep.pooled[0].estimate + rep.pooled[1].estimate;
    const double se = std::hypot(rep.pooled[0].se, rep.pooled[1].se);
    const auto pi = stationary_oracle(speed, opts.h);
    const double oracle = oracle_fraction(pi, speed, ends[0].region) + oracle_fraction(pi, speed, ends[1].region);
    CHECK(within(f, se, oracle));
    CHECK(std::abs(f - set->window_mass(Region::F)) <= 0.05 * 0.75);

    // Path reported on the line: collapsed states sit at F-run midpoints.
    const auto p = simulate_xs(sf, opts, 0.5, 5.0, 42);
    for (std::size_t i = 0; i < p.states.size(); ++i) {
        if (p.flags[i] & kFlagCollapsed) {
            CHECK((p.states[i] == 0.1875 || p.states[i] == 0.8125));
        } else {
            CHECK(set->region_of(p.states[i]) == Region::G);
        }
    }

    const auto empty = share(svc_complement(0, {0.0, 1.0}));
    try {
        simulate_xs(ScaleFunction(empty), opts, 0.5, 1.0, 1);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("collapses the window") != std::string::npos);
    }
}

TEST_CASE("simulate_xs inside a gap behaves as Brownian motion") {
    const auto set = share(svc_complement(1, {0.0, 1.0}));
    ScaleFunction sf(set);
    WalkOptions opts;
    opts.h = 0.0025;
    const double tau = 1e-3;
    const int runs = 4000;
    double ss = 0.0;
    double s4 = 0.0;
    for (int r = 0; r < runs; ++r) {
        const auto p = simulate_xs(sf, opts, 0.5, tau, static_cast<std::uint64_t>(r) + 1000);
        const double d = p.states.back() - 0.5;
        for (std::size_t i = 0; i < p.states.size(); ++i) REQUIRE(set->region_of(p.states[i]) == Region::G);
        ss += d * d;
        s4 += d * d * d * d;
    }
    const double var = ss / runs;
    const double se = std::sqrt((s4 / runs - var * var) / runs);
    CHECK(within(var, se, tau));
}

TEST_CASE("darning process: direct walk and line-side walk agree") {
    const auto set = share(svc_complement(1, {0.0, 1.0}));
    DarningMap j(set, 0.0);
    WalkOptions opts;
    opts.h = 0.005;
    const auto direct = build_walk_chain(darning_speed_measure(darning_image(j)), opts);
    const std::vector<OccupationTarget> targets{{{0.375 - opts.h / 2, 0.375 + opts.h / 2}, "p*"},
                                                {{0.0, 0.2}, "[0, 0.2]"}};
    const auto a = walk_occupation_replicas(direct, 0.2, 100.0, 51, 8, Holding::Exponential, targets, 5.0, 2);

    // Line side: run on the line and map every state through j.
    std::vector<std::vector<double>> frac(targets.size());
    for (std::uint64_t r = 0; r < 8; ++r) {
        const auto p = simulate_darning_line(j, opts, 0.2, 100.0, path_seed(52, r));
        PathSample mapped = p;
        for (double& x : mapped.states) x = j(x);
        const auto res = occupation_fractions(mapped, targets, 5.0);
        for (std::size_t t = 0; t < targets.size(); ++t) frac[t].push_back(res[t].estimate);
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto b = mean_estimate(frac[t], targets[t].label);
        CHECK(within(a.pooled[t].estimate - b.estimate, std::hypot(a.pooled[t].se, b.se), 0.0));
    }
}

TEST_CASE("seed determinism") {
    const auto speed = SpeedMeasure::make({0.0, 0.75}, {{0.0, 0.75, 1.0}}, {{0.375, 0.25}});
    WalkOptions opts;
    opts.h = 0.01;
    const auto p1 = walk_paths(speed, opts, 0.1, 20.0, 77);
    const auto p2 = walk_paths(speed, opts, 0.1, 20.0, 77);
    CHECK(p1.times == p2.times);
    CHECK(p1.states == p2.states);
    const auto h1 = estimate_hitting({0.0, 1.0}, 0.4, exit_opts(3000, 5, 1));
    const auto h8 = estimate_hitting({0.0, 1.0}, 0.4, exit_opts(3000, 5, 8));
    CHECK(h1.left.estimate == h8.left.estimate);
    CHECK(h1.left.se == h8.left.se);
}
