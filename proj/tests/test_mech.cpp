#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ratiomech/mechanism.hpp"
#include "ratiomech/quadrature.hpp"

using namespace ratiomech;

TEST_CASE("leontief utility") {
    CHECK(utility({0.8, 0.5}, {0.5, 1.0, 0.3}) == doctest::Approx(0.8 * 1.0 - 0.3));
    // short side of the ratio binds
    CHECK(utility({0.8, 0.5}, {0.2, 1.0, 0.0}) == doctest::Approx(0.8 * 0.4));
    CHECK(utility({0.5, 1.0}, {0.0, 0.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("posted price outcomes and tie handling") {
    const Mechanism m = PostedPrice{0.5};
    const Outcome buy = outcome_at(m, {0.7, 0.3});
    CHECK(buy.a1 == doctest::Approx(0.3));
    CHECK(buy.a2 == doctest::Approx(1.0));
    CHECK(buy.t == doctest::Approx(0.5));
    const Outcome tie = outcome_at(m, {0.5, 0.3});
    CHECK(tie.a1 == 0.0);
    CHECK(tie.a2 == 0.0);
    CHECK(tie.t == 0.0);
}

TEST_CASE("ratio dependent outcomes") {
    ThresholdCurve psi({0.25, 1.0}, {0.25, 0.5});
    const Mechanism m = make_ratio_dependent(psi);
    CHECK(mechanism_kind(m) == "ratio_dependent");
    const Outcome o = outcome_at(m, {0.9, 0.625});
    CHECK(o.t == doctest::Approx(0.375));  // linear interpolation of the price
    CHECK(o.a1 == doctest::Approx(0.625));
    CHECK(o.a2 == doctest::Approx(1.0));
    const Outcome none = outcome_at(m, {0.3, 0.625});
    CHECK(none.a2 == 0.0);
}

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(make_ratio_dependent(ThresholdCurve({0.2, 1.0}, {0.6, 0.4})),
                    InvalidCurveError);
    // psi(k)/k must be nonincreasing: 0.1/0.2 = 0.5 < 0.9/1.0
    CHECK_THROWS_AS(make_ratio_dependent(ThresholdCurve({0.2, 1.0}, {0.1, 0.9})),
                    InvalidCurveError);
    CHECK_THROWS_AS(make_ratio_dependent(ThresholdCurve({0.2, 1.0}, {0.5, 1.4})),
                    InvalidCurveError);
    const Mechanism flat = make_ratio_dependent(ThresholdCurve({0.2, 1.0}, {0.5, 0.5}));
    CHECK(mechanism_kind(flat) == "posted_price");
    CHECK(std::get<PostedPrice>(flat).rho == doctest::Approx(0.5));
}

TEST_CASE("payment identity reproduces v^2/2 for f2 = v") {
    const auto vs = quad::linspace(0.0, 1.0, 101);
    const std::vector<double> ks{0.5, 1.0};
    std::vector<std::vector<double>> f2(vs.size(), std::vector<double>(ks.size()));
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < ks.size(); ++j) f2[i][j] = vs[i];
    const auto p = payment_from_allocation(vs, ks, f2, 0.0);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        // trapezoid integrates the linear allocation exactly
        CHECK(p[i][0] == doctest::Approx(vs[i] * vs[i] / 2).epsilon(1e-12));
    }

    std::vector<std::vector<double>> bad = f2;
    bad[50][0] = 0.0;
    CHECK_THROWS_AS(payment_from_allocation(vs, ks, bad, 0.0), PreconditionError);
}

TEST_CASE("grid mechanism caches exact cumulatives") {
    const std::vector<double> vs{0.0, 0.5, 1.0}, ks{1.0};
    GridMechanism g(vs, ks, {{0.0}, {0.5}, {1.0}}, {{0.0}, {0.1}, {0.4}});
    CHECK(g.cum(2, 0) == doctest::Approx(0.5));
    CHECK(g.cum_at(0.75, 0) == doctest::Approx(0.125 + (0.5 - 0.125) * 0.5));
    CHECK(g.f1(1, 0) == doctest::Approx(1.0 * 0.5));
    CHECK(g.max_abs_payment() == doctest::Approx(0.4));
    CHECK_THROWS_AS(outcome_at(Mechanism{g}, {0.25, 1.0}), DomainError);
    const Outcome o = outcome_at(Mechanism{g}, {0.5, 1.0});
    CHECK(o.a2 == doctest::Approx(0.5));
    CHECK(o.t == doctest::Approx(0.1));
}

TEST_CASE("non-wasteful reduction keeps the binding coordinate") {
    RawGridMechanism raw;
    raw.v_grid = {0.0, 1.0};
    raw.k_grid = {0.5};
    raw.f1 = {{0.9}, {0.25}};  // first row wastes good 1 (f1/k = 1.8 > f2)
    raw.f2 = {{0.6}, {1.0}};   // second row wastes good 2 (f1/k = 0.5 < f2)
    raw.p = {{0.0}, {0.3}};
    const auto g = non_wasteful_reduction(raw);
    CHECK(g.f2(0, 0) == doctest::Approx(0.6));
    CHECK(g.f1(0, 0) == doctest::Approx(0.3));
    CHECK(g.f2(1, 0) == doctest::Approx(0.5));
    CHECK(g.f1(1, 0) == doctest::Approx(0.25));
    // payments and truthful utilities are untouched
    for (int i = 0; i < 2; ++i) {
        const TypePoint t{raw.v_grid[i], 0.5};
        CHECK(g.payment(i, 0) == doctest::Approx(raw.p[i][0]));
        CHECK(utility(t, g.outcome(i, 0)) ==
              doctest::Approx(utility(t, Outcome{raw.f1[i][0], raw.f2[i][0], raw.p[i][0]})));
    }
}

TEST_CASE("to_grid samples closed forms") {
    const auto vs = quad::linspace(0.0, 1.0, 5);
    const auto ks = quad::linspace(0.25, 1.0, 4);
    const auto g = to_grid(PostedPrice{0.5}, vs, ks);
    CHECK(g.f2(1, 0) == doctest::Approx(0.0));  // v = 0.25 below the price
    CHECK(g.f2(3, 0) == doctest::Approx(1.0));  // v = 0.75 buys
    CHECK(g.payment(3, 0) == doctest::Approx(0.5));
    CHECK(g.payment(2, 0) == doctest::Approx(0.0));  // tie at v = 0.5
}

TEST_CASE("json round trips") {
    const Mechanism pp = PostedPrice{0.375};
    const auto pp2 = mechanism_from_json(mechanism_to_json(pp));
    CHECK(std::get<PostedPrice>(pp2).rho == doctest::Approx(0.375));

    ThresholdCurve psi({0.25, 1.0}, {0.25, 0.5});
    const Mechanism rd = RatioDependent{psi};
    const auto rd2 = mechanism_from_json(mechanism_to_json(rd));
    CHECK(std::get<RatioDependent>(rd2).psi(0.625) == doctest::Approx(0.375));

    const std::vector<double> vs{0.0, 0.5, 1.0}, ks{0.5, 1.0};
    GridMechanism g(vs, ks, {{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}},
                    {{0.0, 0.0}, {0.1, 0.05}, {0.4, 0.5}});
    const auto g2 = std::get<GridMechanism>(mechanism_from_json(mechanism_to_json(Mechanism{g})));
    CHECK(g2.f2(1, 1) == doctest::Approx(0.25));
    CHECK(g2.payment(2, 1) == doctest::Approx(0.5));

    CHECK_THROWS(mechanism_from_json("{\"kind\":\"mystery\"}"));
}

TEST_CASE("file round trip and csv schema") {
    const Mechanism pp = PostedPrice{0.25};
    write_mechanism(pp, "test_mech_roundtrip.json");
    const auto back = read_mechanism("test_mech_roundtrip.json");
    CHECK(std::get<PostedPrice>(back).rho == doctest::Approx(0.25));
    std::remove("test_mech_roundtrip.json");

    const std::vector<double> vs{0.0, 1.0}, ks{1.0};
    GridMechanism g(vs, ks, {{0.0}, {1.0}}, {{0.0}, {0.5}});
    write_grid_csv(g, "test_mech_grid.csv");
    std::FILE* f = std::fopen("test_mech_grid.csv", "r");
    REQUIRE(f != nullptr);
    char line[256];
    REQUIRE(std::fgets(line, sizeof(line), f) != nullptr);
    CHECK(std::string(line) == "v,k,f1,f2,p\n");
    std::fclose(f);
    std::remove("test_mech_grid.csv");
}
