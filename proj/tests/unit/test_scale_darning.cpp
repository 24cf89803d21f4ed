#include "generators.hpp"

#include <doctest.h>

using namespace traceform;
using tfgen::Gen;
using tfgen::share;

namespace {

std::shared_ptr<const IntervalSet> svc1(Tails tails = {}) { return share(svc_complement(1, {0.0, 1.0}, tails)); }

// Direct integral of an indicator of `which` from a to b by summing component overlaps.
double indicator_integral(const IntervalSet& set, Region which, double a, double b) {
    const double sign = a <= b ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double g = 0.0;
    for (const auto& c : set.components()) g += std::max(0.0, std::min(hi, c.hi) - std::max(lo, c.lo));
    return sign * (which == Region::G ? g : (hi - lo) - g);
}

// A point of F strictly between component endpoints.
double interior_f_point(Gen& g, const IntervalSet& set) {
    const auto fc = set.f_components();
    const auto& f = fc[static_cast<std::size_t>(g.integer(0, static_cast<int>(fc.size()) - 1))];
    return g.uniform(f.lo + 0.25 * f.length(), f.hi - 0.25 * f.length());
}

}  // namespace

TEST_CASE("scale function on depth-1 SVC") {
    ScaleFunction s(svc1(), 0.0);
    CHECK(s(0.625) - s(0.375) == 0.25);
    CHECK(s(0.625) - s(0.375) == indicator_integral(s.base(), Region::G, 0.375, 0.625));
    CHECK(s(0.375) - s(0.0) == 0.0);
    const auto pre = s.inverse(s(0.375));
    CHECK(pre == Interval{0.0, 0.375});
    CHECK(scale_inverse(s, 0.125) == Interval{0.5, 0.5});
    CHECK_THROWS_AS(s.inverse(0.3), PreconditionError);
}

TEST_CASE("classify_case examples") {
    CHECK(classify_case(periodic_fat_cantor(1, 2.0)) == BoundaryCase::CaseI);
    CHECK(classify_case(periodic_fat_cantor(3, 3.5)) == BoundaryCase::CaseI);
    CHECK(classify_case(svc_complement(2, {0.0, 1.0}, {Tail::AllF, Tail::AllG})) == BoundaryCase::CaseII);
    CHECK(classify_case(svc_complement(2, {0.0, 1.0}, {Tail::AllG, Tail::AllF})) == BoundaryCase::CaseII);
    CHECK(classify_case(svc_complement(2, {0.0, 1.0}, {Tail::AllF, Tail::AllF})) == BoundaryCase::CaseIII);
    CHECK(classify_case(svc_complement(2, {0.0, 1.0}, {Tail::AllG, Tail::AllG})) == BoundaryCase::CaseI);
}

TEST_CASE("darning map on depth-1 SVC with z = 0") {
    DarningMap j(svc1(), 0.0);
    CHECK(j(1.0) == 0.75);
    CHECK(j(0.0) == 0.0);
    for (double x : {0.375, 0.4, 0.5, 0.6, 0.625}) CHECK(j(x) == 0.375);
    CHECK(darning_map_eval(j, 0.8) == indicator_integral(j.base(), Region::F, 0.0, 0.8));

    const auto img = darning_image(j);
    REQUIRE(img.collapsed.size() == 1);
    CHECK(img.collapsed[0].location == 0.375);
    CHECK(img.collapsed[0].width == 0.25);
    CHECK(img.window_image == Interval{0.0, 0.75});
    CHECK(j.inverse(0.375) == Interval{0.375, 0.625});
}

TEST_CASE("darning map anchor rules") {
    CHECK_THROWS_AS(DarningMap(svc1(), 0.375), PreconditionError);
    CHECK_THROWS_AS(DarningMap(svc1(), 0.5), PreconditionError);
    CHECK(DarningMap(svc1()).z() == 0.0);
    CHECK(DarningMap(svc1({Tail::AllG, Tail::AllG})).z() == 0.1875);
    DarningMap j(svc1(), 0.8);
    CHECK(j(0.8) == 0.0);
}

TEST_CASE("pushforward of Lebesgue, 1_F dx and the trace measure") {
    DarningMap j(svc1(), 0.0);

    const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
    CHECK(mj.carrier() == Interval{0.0, 0.75});
    REQUIRE(mj.atoms().size() == 1);
    CHECK(mj.atoms()[0].location == 0.375);
    CHECK(mj.atoms()[0].mass == 0.25);
    CHECK(mj.total_mass() == 1.0);
    CHECK(mj.density_at(0.2) == 1.0);
    CHECK(mj.density_at(0.6) == 1.0);

    const auto mf = pushforward_speed(j, SpeedSource::FLebesgue);
    CHECK(mf.carrier() == Interval{0.0, 0.75});
    CHECK(mf.atoms().empty());
    CHECK(mf.total_mass() == 0.75);

    // Each endpoint of I_1 carries d/2 = 1/8 and both land on p*_1.
    const auto mu = pushforward_speed(j, trace_measure(j.base()).measure);
    REQUIRE(mu.atoms().size() == 1);
    CHECK(mu.atoms()[0].location == 0.375);
    CHECK(mu.atoms()[0].mass == 0.125 + 0.125);
}

TEST_CASE("pushforward with AllG tails carries infinite end atoms") {
    DarningMap j(svc1({Tail::AllG, Tail::AllG}));
    const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
    const auto img = darning_image(j);
    REQUIRE(img.p_minus);
    REQUIRE(img.p_plus);
    CHECK(mj.atoms().front().location == *img.p_minus);
    CHECK(mj.atoms().front().infinite());
    CHECK(mj.atoms().back().location == *img.p_plus);
    CHECK(mj.atoms().back().infinite());
}

TEST_CASE("property: s and j increments add up to y - x") {
    Gen g(21);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = g.coin() ? g.random_set() : g.random_svc(5);
        ScaleFunction s(set, g.uniform(0.0, 1.0));
        DarningMap j(set);
        double x = g.uniform(0.0, 1.0);
        double y = g.uniform(0.0, 1.0);
        if (x > y) std::swap(x, y);
        CHECK(std::abs((s(y) - s(x)) + (j(y) - j(x)) - (y - x)) <= 1e-12);
        CHECK(std::abs((s(y) - s(x)) - indicator_integral(*set, Region::G, x, y)) <= 1e-12);
    }
}

TEST_CASE("property: j is invertible on F minus H") {
    Gen g(22);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = g.coin() ? g.random_set() : g.random_svc(5);
        DarningMap j(set);
        const double x = interior_f_point(g, *set);
        const auto pre = j.inverse(j(x));
        CHECK(std::abs(pre.lo - x) <= 1e-12);
        CHECK(pre.lo == pre.hi);
    }
}

TEST_CASE("property: pushforward preserves the mass of corresponding intervals") {
    Gen g(23);
    for (int trial = 0; trial < 300; ++trial) {
        const auto set = g.coin() ? g.random_set({0.0, 1.0}, {}) : g.random_svc(5);
        DarningMap j(set);
        const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
        double x = interior_f_point(g, *set);
        double y = interior_f_point(g, *set);
        if (x > y) std::swap(x, y);
        CHECK(std::abs(mj.mass({j(x), j(y)}) - (y - x)) <= 1e-12);
    }
}

TEST_CASE("property: classify_case is unchanged by enlarging the window on AllF sides") {
    Gen g(24);
    for (int trial = 0; trial < 200; ++trial) {
        const Tails tails{g.tail(), g.tail()};
        const auto set = g.random_set({0.0, 1.0}, tails);
        const std::vector<Interval> comps(set->components().begin(), set->components().end());
        const Interval wider{tails.left == Tail::AllF ? -g.uniform(0.1, 3.0) : 0.0,
                             tails.right == Tail::AllF ? 1.0 + g.uniform(0.1, 3.0) : 1.0};
        const auto bigger = IntervalSet::build(comps, tails, wider);
        CHECK(classify_case(*set) == classify_case(bigger));
    }
}
