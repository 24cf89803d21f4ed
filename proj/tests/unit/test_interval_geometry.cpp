#include "generators.hpp"

#include <doctest.h>

using namespace traceform;
using tfgen::Gen;

namespace {

// Brute-force G-mass of [lo, hi] by direct overlap with the listed components.
double overlap_mass(const IntervalSet& set, double lo, double hi) {
    double m = 0.0;
    for (const auto& c : set.components()) m += std::max(0.0, std::min(hi, c.hi) - std::max(lo, c.lo));
    return m;
}

// Exhaustive scan of window subintervals of length delta at resolution delta / 256,
// plus every start point aligned with a component endpoint.
bool scan_dense(const IntervalSet& set, double delta) {
    const auto w = set.window();
    const double len = std::min(delta, w.length());
    std::vector<double> starts;
    for (int k = 0; k <= 256 * static_cast<int>(std::ceil(w.length() / len)); ++k) {
        starts.push_back(w.lo + k * len / 256.0);
    }
    starts.push_back(w.hi - len);
    for (const auto& c : set.components()) {
        starts.push_back(c.hi);
        starts.push_back(c.lo - len);
    }
    for (double t : starts) {
        if (t < w.lo || t + len > w.hi) continue;
        if (overlap_mass(set, t, t + len) <= 0.0) return false;
    }
    return true;
}

// Removed length of the SVC construction: sum_{i<=k} 2^(i-1) 4^(-i).
double svc_removed(int k) {
    double m = 0.0;
    for (int i = 1; i <= k; ++i) m += std::ldexp(1.0, i - 1) * std::ldexp(1.0, -2 * i);
    return m;
}

}  // namespace

TEST_CASE("build: complement of one component") {
    const auto set = IntervalSet::build({{0.375, 0.625}}, {Tail::AllG, Tail::AllG}, {0.0, 1.0});
    const auto f = set.f_components();
    REQUIRE(f.size() == 2);
    CHECK(f[0] == Interval{0.0, 0.375});
    CHECK(f[1] == Interval{0.625, 1.0});
}

TEST_CASE("build: shared endpoint is rejected") {
    try {
        IntervalSet::build({{0.0, 1.0}, {1.0, 2.0}}, {}, {-1.0, 3.0});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("shared endpoint") != std::string::npos);
    }
}

TEST_CASE("build: overlap is rejected") {
    try {
        IntervalSet::build({{0.1, 0.2}, {0.15, 0.3}}, {}, {0.0, 1.0});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("overlap") != std::string::npos);
    }
}

TEST_CASE("svc_complement small depths") {
    const auto d1 = svc_complement(1, {0.0, 1.0});
    REQUIRE(d1.components().size() == 1);
    CHECK(d1.components()[0] == Interval{0.375, 0.625});
    CHECK(d1.window_mass(Region::G) == svc_removed(1));
    CHECK(svc_removed(1) == 0.25);

    const auto d2 = svc_complement(2, {0.0, 1.0});
    CHECK(d2.components().size() == 3);
    CHECK(d2.window_mass(Region::G) == svc_removed(2));
    CHECK(d2.window_mass(Region::F) == 1.0 - svc_removed(2));
    CHECK(svc_removed(2) == 0.375);

    const auto d0 = svc_complement(0, {0.0, 1.0});
    CHECK(d0.components().empty());
    CHECK(d0.window_mass(Region::F) == 1.0);
}

TEST_CASE("svc_complement depth bound") {
    CHECK_THROWS_AS(svc_complement(21, {0.0, 1.0}), PreconditionError);
    CHECK_NOTHROW(svc_complement(12, {0.0, 1.0}, {}, 12));
}

TEST_CASE("periodic_fat_cantor layout") {
    const auto p1 = periodic_fat_cantor(1, 2.0);
    CHECK(p1.window() == Interval{0.0, 2.0});
    REQUIRE(p1.components().size() == 2);
    CHECK(p1.components()[0] == Interval{0.375, 0.625});
    CHECK(p1.components()[1] == Interval{1.0, 2.0});
    CHECK(p1.tails().left == Tail::Periodic);
    CHECK(p1.tails().right == Tail::Periodic);

    const auto p0 = periodic_fat_cantor(0, 2.0);
    REQUIRE(p0.components().size() == 1);
    CHECK(p0.components()[0] == Interval{1.0, 2.0});
    REQUIRE(p0.f_components().size() == 1);
    CHECK(p0.f_components()[0] == Interval{0.0, 1.0});

    CHECK_THROWS_AS(periodic_fat_cantor(1, 1.0), PreconditionError);
}

TEST_CASE("validate examples") {
    const auto d3 = svc_complement(3, {0.0, 1.0});
    CHECK(validate(d3, 0.2).measure_dense == scan_dense(d3, 0.2));
    CHECK(validate(d3, 0.2).measure_dense);

    const auto one = IntervalSet::build({{0.0, 0.1}}, {}, {0.0, 1.0});
    const auto rep = validate(one, 0.2);
    CHECK_FALSE(rep.measure_dense);
    CHECK(overlap_mass(one, 0.5, 0.7) == 0.0);

    const auto empty = IntervalSet::build({}, {}, {0.0, 1.0});
    CHECK_FALSE(validate(empty, 0.05).measure_dense);
    CHECK_FALSE(validate(empty, 5.0).measure_dense);
}

TEST_CASE("validate: depth-2 SVC at delta 0.1 follows the exhaustive scan") {
    // The F-run [0, 5/32] is longer than 0.1, so the scan finds an interval missing G.
    const auto d2 = svc_complement(2, {0.0, 1.0});
    CHECK(d2.f_components()[0] == Interval{0.0, 0.15625});
    CHECK(scan_dense(d2, 0.1) == false);
    CHECK(validate(d2, 0.1).measure_dense == scan_dense(d2, 0.1));
    CHECK(validate(d2, 0.16).measure_dense == scan_dense(d2, 0.16));
}

TEST_CASE("validate_components reports structural failures without throwing") {
    const auto rep = validate_components({{0.0, 1.0}, {1.0, 2.0}}, {}, {-1.0, 3.0}, 0.1);
    CHECK_FALSE(rep.no_shared_endpoints);
    CHECK_FALSE(rep.ok());
    const auto rep2 = validate_components({{0.15, 0.3}, {0.1, 0.2}}, {}, {0.0, 1.0}, 0.1);
    CHECK_FALSE(rep2.sorted);
    CHECK_FALSE(rep2.no_overlaps);
}

TEST_CASE("lebesgue examples") {
    const auto d1 = svc_complement(1, {0.0, 1.0});
    CHECK(lebesgue(d1, {0.0, 1.0}, Region::G) == 0.25);
    CHECK(lebesgue(d1, {0.0, 0.375}, Region::F) == 0.375);

    // Per period: 1/4 inside K plus the gap (1, 2).
    const auto p1 = periodic_fat_cantor(1, 2.0);
    const double per_period = 0.25 + (2.0 - 1.0);
    CHECK(lebesgue(p1, {0.0, 4.0}, Region::G) == doctest::Approx(2 * per_period).epsilon(1e-15));
    CHECK(2 * per_period == 2.5);
}

TEST_CASE("property: G and F masses add up to the query length") {
    Gen g(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = g.coin() ? g.random_set() : g.random_svc(6);
        double a = g.uniform(-1.0, 2.0);
        double b = g.uniform(-1.0, 2.0);
        if (a > b) std::swap(a, b);
        const double sum = lebesgue(*set, {a, b}, Region::G) + lebesgue(*set, {a, b}, Region::F);
        CHECK(std::abs(sum - (b - a)) <= 1e-12);
    }
}

TEST_CASE("property: SVC F-fraction is 1/2 + 2^(-k-1)") {
    for (int k = 0; k <= 10; ++k) {
        for (const Interval w : {Interval{0.0, 1.0}, Interval{-2.0, 6.0}}) {
            const auto s = svc_complement(k, w);
            const double frac = s.window_mass(Region::F) / w.length();
            CHECK(std::abs(frac - (0.5 + std::ldexp(1.0, -k - 1))) <= 1e-12);
        }
    }
}

TEST_CASE("property: H has two points per component, all in F") {
    Gen g(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = g.coin() ? g.random_set() : g.random_svc(6);
        const auto h = set->endpoints();
        CHECK(h.size() == 2 * set->components().size());
        for (double x : h) CHECK(set->region_of(x) == Region::F);
    }
}

TEST_CASE("property: validate is monotone in delta") {
    Gen g(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = g.coin() ? g.random_set() : g.random_svc(6);
        const double d = g.uniform(0.01, 0.5);
        if (validate(*set, d).measure_dense) {
            for (double larger : {d * 1.01, d * 1.5, d * 3.0, 10.0}) CHECK(validate(*set, larger).measure_dense);
        }
        CHECK(validate(*set, d).measure_dense == scan_dense(*set, d));
    }
}
