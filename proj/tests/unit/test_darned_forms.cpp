#include "generators.hpp"

#include <doctest.h>

using namespace traceform;
using tfgen::Gen;
using tfgen::share;

namespace {

std::shared_ptr<const IntervalSet> svc1(Tails tails = {}) { return share(svc_complement(1, {0.0, 1.0}, tails)); }

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("darned energy examples") {
    const auto set = svc1();
    DarningMap j(set, 0.0);
    const GridFunction uh({0.0, 0.75}, {0.0, 0.75});
    CHECK(darned_energy(uh, uh).value == 0.375);
    CHECK(darned_energy(uh, uh).tag == FormTag::Darned);
    const auto u = undarn_function(uh, j);
    const auto regions = cell_regions(u, *set);
    const auto d = derivative(u);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == (regions[i] == Region::F ? 1.0 : 0.0));
    CHECK(dirichlet_energy(u, u).value == 0.375);

    const auto c = GridFunction::constant({0.0, 0.75}, 1.0);
    CHECK(darned_energy(c, c).value == 0.0);
    const GridFunction a({0.0, 0.2, 0.3, 0.75}, {0.0, 1.0, 0.0, 0.0});
    const GridFunction b({0.0, 0.4, 0.5, 0.75}, {0.0, 0.0, 1.0, 0.0});
    CHECK(darned_energy(a, b).value == 0.0);
}

TEST_CASE("metrics of the F-cumulative on depth-1 SVC") {
    const auto set = svc1();
    DarningMap j(set, 0.0);
    const std::vector<double> nodes{0.0, 0.375, 0.625, 1.0};
    const auto u = GridFunction::sample(nodes, [&](double x) { return j(x); });
    const auto uh = darn_function(u, j);
    CHECK(sup_norm(u) == sup_norm(uh));
    CHECK(sup_norm(u) == 0.75);

    // Line side: x^2 on [0, 3/8], (3/8)^2 on the gap, (x - 1/4)^2 on [5/8, 1].
    const double a = 0.375;
    const double line = a * a * a / 3 + a * a * 0.25 + (0.75 * 0.75 * 0.75 - a * a * a) / 3;
    // Image side: y^2 dy on [0, 3/4] plus the atom 1/4 at 3/8.
    const double image = 0.75 * 0.75 * 0.75 / 3 + 0.25 * a * a;
    CHECK(line == doctest::Approx(image).epsilon(1e-15));
    CHECK(l2_norm_sq_line(u, *set) == doctest::Approx(line).epsilon(1e-14));
    const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
    CHECK(l2_norm_sq(uh, mj) == doctest::Approx(image).epsilon(1e-14));
}

TEST_CASE("constants keep all three metrics") {
    const auto set = svc1();
    DarningMap j(set, 0.0);
    ScaleFunction sf(set);
    const std::vector<GridFunction> samples{GridFunction::constant({0.0, 0.375, 0.625, 1.0}, -1.5)};
    const auto rep = equivalence_report(samples, j, sf);
    REQUIRE(rep.samples.size() == 1);
    CHECK(rep.samples[0].sup.line == rep.samples[0].sup.darned);
    CHECK(rep.samples[0].l2_sq.line == rep.samples[0].l2_sq.darned);
    CHECK(rep.samples[0].energy.line == 0.0);
    CHECK(rep.samples[0].energy.darned == 0.0);
    CHECK(rep.all_agree());
}

TEST_CASE("AllG tails: L2 is infinite unless the function vanishes at the edges") {
    const auto set = svc1({Tail::AllG, Tail::AllG});
    DarningMap j(set);
    const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
    const auto one = GridFunction::constant({0.0, 0.375, 0.625, 1.0}, 1.0);
    CHECK(std::isinf(l2_norm_sq_line(one, *set)));
    CHECK(std::isinf(l2_norm_sq(darn_function(one, j), mj)));
    const GridFunction bump({0.0, 0.2, 0.375, 0.625, 1.0}, {0.0, 1.0, 0.0, 0.0, 0.0});
    CHECK(l2_norm_sq_line(bump, *set) == doctest::Approx(l2_norm_sq(darn_function(bump, j), mj)).epsilon(1e-14));
}

TEST_CASE("darning respects products") {
    Gen g(61);
    for (int trial = 0; trial < 100; ++trial) {
        const auto set = g.coin() ? g.random_svc(4) : g.random_set();
        DarningMap j(set);
        const auto u = g.random_complement_member(*set);
        const auto v = g.random_complement_member(*set);
        const auto prod = darn_function(pointwise_product(u, v), j);
        const auto [a, b] = on_common_grid(darn_function(u, j), darn_function(v, j));
        REQUIRE(prod.size() == a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(prod.nodes()[i] - a.nodes()[i]) <= 1e-13);
            CHECK(prod.values()[i] == doctest::Approx(a.values()[i] * b.values()[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("property: darning preserves energy, sup and L2") {
    Gen g(62);
    for (int trial = 0; trial < 100; ++trial) {
        const auto set = g.coin() ? g.random_svc(4) : g.random_set({0.0, 1.0}, {});
        DarningMap j(set);
        ScaleFunction sf(set);
        const auto u = g.random_complement_member(*set);
        const auto uh = darn_function(u, j);
        const double e = dirichlet_energy(u, u).value;
        CHECK(std::abs(darned_energy(uh, uh).value - e) <= 1e-12 * std::max(1.0, e));
        CHECK(sup_norm(uh) == sup_norm(u));
        const auto mj = pushforward_speed(j, SpeedSource::Lebesgue);
        CHECK(tfgen::rel_err(l2_norm_sq(uh, mj), l2_norm_sq_line(u, *set)) <= 1e-12);

        const std::vector<GridFunction> one{u};
        const auto rep = equivalence_report(one, j, sf);
        CHECK(rep.all_agree());
        CHECK(rep.samples[0].trace_side_identical);
    }
}

TEST_CASE("property: slopes are transported cell by cell") {
    Gen g(63);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = g.coin() ? g.random_svc(4) : g.random_set();
        DarningMap j(set);
        const auto u = g.random_complement_member(*set);
        const auto uh = darn_function(u, j);
        const auto du = derivative(u);
        const auto duh = derivative(uh);
        const auto regions = cell_regions(u, *set);
        for (std::size_t i = 0; i < du.size(); ++i) {
            if (regions[i] != Region::F) continue;
            const double mid = j(0.5 * (u.nodes()[i] + u.nodes()[i + 1]));
            const auto k = static_cast<std::size_t>(
                std::upper_bound(uh.nodes().begin(), uh.nodes().end(), mid) - uh.nodes().begin() - 1);
            CHECK(std::abs(duh[k] - du[i]) <= 1e-9 * std::max(1.0, std::abs(du[i])));
        }
    }
}

TEST_CASE("property: line-side and trace-side darnings coincide") {
    Gen g(64);
    for (int trial = 0; trial < 200; ++trial) {
        const auto set = g.coin() ? g.random_svc(4) : g.random_set();
        DarningMap j(set);
        const auto u = g.random_complement_member(*set);
        const auto line = darn_function(u, j);
        const auto trace = darn_trace_function(TraceFunction::restrict(u, *set), j);
        CHECK(vec(line.nodes()) == vec(trace.nodes()));
        CHECK(vec(line.values()) == vec(trace.values()));
    }
}
