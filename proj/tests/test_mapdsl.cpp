#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "udc/error.hpp"
#include "udc/lift.hpp"
#include "udc/mapdsl.hpp"

using namespace udc;

namespace {
TropicalValue q(long n, long d = 1) { return TropicalValue(make_rational(n, d)); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

const char* kQp1 = R"(vars: x, y, t
params: a -> A, q -> Q
x' = y
y' = (a*t*y+1)/(x*y^2)
t' = q*t
)";
}  // namespace

TEST_CASE("parse the nonautonomous system") {
    auto m = parse_map(kQp1);
    CHECK(m.state == std::vector<std::string>{"x", "y", "t"});
    REQUIRE(m.params.size() == 2);
    CHECK(m.params[0].name == "a");
    CHECK(m.params[0].alias == "A");
    CHECK(m.params[1].alias == "Q");
    REQUIRE(m.updates.size() == 3);
    CHECK(structurally_equal(m.updates[0], ex::var("y")));
    CHECK(structurally_equal(m.updates[2], ex::mul(ex::param("q"), ex::var("t"))));
    auto y = ex::div(ex::add(ex::mul(ex::mul(ex::param("a"), ex::var("t")), ex::var("y")), ex::lit(1)),
                     ex::mul(ex::var("x"), ex::pow(ex::var("y"), 2)));
    CHECK(structurally_equal(m.updates[1], y));
}

TEST_CASE("parse errors") {
    CHECK(code_of([] { parse_map("vars: x\nx' = (x\n"); }) == ErrorCode::SyntaxError);
    CHECK(code_of([] { parse_map("vars: x\nx' = x + y\n"); }) == ErrorCode::UndeclaredName);
    CHECK(code_of([] { parse_map("vars: x\nx' = x^(1/2)\n"); }) == ErrorCode::NonIntegerExponent);
    CHECK(code_of([] { parse_map("vars: x, y\nx' = y\n"); }) == ErrorCode::InvalidMap);
    CHECK(code_of([] { parse_map("vars: x\nparams: x -> X\nx' = x\n"); }) == ErrorCode::InvalidMap);
    try {
        parse_map("vars: x\nx' = (x\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("two-operator tree") {
    auto m = parse_map("vars: w, v\nw' = (w+1)/v\nv' = w\n");
    CHECK(structurally_equal(m.updates[0], ex::div(ex::add(ex::var("w"), ex::lit(1)), ex::var("v"))));
}

TEST_CASE("subtraction-free check") {
    auto m = parse_map(kQp1);
    CHECK(is_subtraction_free(m.updates[1]));
    CHECK_FALSE(is_subtraction_free(parse_expr("w - 1", {"w"})));
    CHECK(is_subtraction_free(parse_expr("x^(-1)", {"x"})));
    CHECK_FALSE(is_subtraction_free(parse_expr("-x", {"x"})));
    CHECK_FALSE(is_subtraction_free(ex::add(ex::var("x"), ex::lit(0))));
}

TEST_CASE("ultradiscretize the systems") {
    auto tm = ultradiscretize(parse_map(kQp1));
    CHECK(tm.state == std::vector<std::string>{"X", "Y", "T"});
    CHECK(tm.params == std::vector<std::string>{"A", "Q"});
    CHECK(structurally_equal(tm.updates[0], trop::var("Y")));
    auto y = trop::minus(trop::max({trop::plus({trop::var("A"), trop::var("T"), trop::var("Y")}), trop::lit(q(0))}),
                         trop::plus({trop::var("X"), trop::scale(2, trop::var("Y"))}));
    CHECK(structurally_equal(tm.updates[1], y));
    CHECK(structurally_equal(tm.updates[2], trop::plus({trop::var("Q"), trop::var("T")})));

    auto aut = ultradiscretize(parse_map("vars: x, y\nx' = y\ny' = (y+1)/x\n"));
    CHECK(structurally_equal(aut.updates[1], trop::minus(trop::max({trop::var("Y"), trop::lit(q(0))}), trop::var("X"))));

    CHECK(structurally_equal(ultradiscretize(parse_expr("x^3", {"x"})), trop::scale(3, trop::var("x"))));
    CHECK(code_of([] { ultradiscretize(parse_expr("w - 1", {"w"})); }) == ErrorCode::NotSubtractionFree);
}

TEST_CASE("map printing round-trips") {
    std::vector<std::string> sources = {
        kQp1,
        "vars: x, y\nx' = y\ny' = (1 + y)/x\n",
        "vars: u, v\nu' = -u + 3/4*v^-2\nv' = (u - v)/(2*(u + v))^3\n",
        "vars: p\np' = 1/(2/p)\n",
    };
    for (const auto& s : sources) {
        auto m = parse_map(s);
        INFO(to_string(m));
        CHECK(structurally_equal(parse_map(to_string(m)), m));
    }
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto e = testing::random_sf_expr(rng, {"a", "b", "c"}, 5);
        INFO(to_string(e));
        CHECK(structurally_equal(parse_expr(to_string(e), {"a", "b", "c"}), e));
    }
}

TEST_CASE("tropical map files") {
    auto tm = parse_tropical_map("kind: tropical\nvars: X, Y\nX' = Y\nY' = max(0, Y) - X\n");
    CHECK(tm.state.size() == 2);
    auto orb = orbit(tm, {q(3), q(0)}, {}, 5);
    CHECK(orb[5] == orb[0]);
    auto back = parse_tropical_map(to_string(tm));
    CHECK(structurally_equal(back.updates[1], tm.updates[1]));
}

TEST_CASE("numeric limit check examples") {
    auto devs = numeric_ud_check(parse_expr("x1 + x2", {"x1", "x2"}), {{"x1", q(0)}, {"x2", q(1)}},
                                 {make_rational(1, 100)});
    REQUIRE(devs[0].deviation);
    CHECK(*devs[0].deviation < 1e-3);

    auto sq = numeric_ud_check(parse_expr("x^2", {"x"}), {{"x", q(3)}},
                               {make_rational(1, 10), make_rational(1, 100), make_rational(1, 1000)});
    for (const auto& d : sq) CHECK(*d.deviation == doctest::Approx(0.0).epsilon(1e-12));

    auto twice = numeric_ud_check(parse_expr("x + x", {"x"}), {{"x", q(0)}}, {make_rational(1, 10), make_rational(1, 1000)});
    CHECK(*twice[0].deviation == doctest::Approx(0.1 * std::log(2.0)));
    CHECK(*twice[1].deviation == doctest::Approx(0.001 * std::log(2.0)));

    // Large X/eps stays finite in the log domain.
    auto big = numeric_ud_check(parse_expr("x + 1", {"x"}), {{"x", q(10)}}, {make_rational(1, 1000)});
    REQUIRE(big[0].deviation);
    CHECK(*big[0].deviation < 1e-9);

    CHECK(code_of([] { numeric_ud_check(parse_expr("x", {"x"}), {{"x", q(0)}}, {make_rational(1, 100), make_rational(1, 10)}); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("lift examples") {
    auto m = parse_map("vars: w0, w1\nw0' = w1\nw1' = (1 + w1)/w0\n");
    auto r = lift(m, {{"w0", Monomial{1, make_rational(5, 2)}}, {"W1", Monomial{1, -8}}});
    CHECK(r.initial[1] == PuiseuxSeries::monomial(1, -8));
    auto d = lift(m, {{"w0", Monomial{1, 2}}, {"w1", Monomial{-1, make_rational(1, 64)}}});
    CHECK(d.initial[1].terms() == std::vector<SeriesTerm>{{make_rational(1, 64), -1}});
    CHECK(code_of([&] { lift(m, {{"w0", Monomial{0, 2}}, {"w1", Monomial{1, 0}}}); }) == ErrorCode::ZeroAssignment);
    auto z = lift(m, {{"w0", Monomial{1, 2}}, {"w1", PuiseuxSeries::zero()}});
    CHECK(z.initial[1].is_exact_zero());

    // The lifted map is w_{n+1} w_{n-1} = w_n + 1.
    auto next = d.map.step(d.initial);
    auto lhs = ps_mul(next[1], d.initial[0]);
    auto rhs = ps_add(d.initial[1], PuiseuxSeries::constant(1));
    CHECK(lhs == rhs);
}

TEST_CASE("valuation of lifted evaluation equals the tropical evaluation") {
    std::mt19937 rng(2024);
    std::vector<std::string> vars{"a", "b", "c"};
    for (int i = 0; i < 60; ++i) {
        auto e = testing::random_sf_expr(rng, vars, 4);
        std::map<std::string, PuiseuxSeries, std::less<>> env;
        TropEnv tenv;
        for (const auto& v : vars) {
            Rational x = testing::random_rational(rng, -5, 5, 4);
            env[v] = PuiseuxSeries::monomial(1, x);
            tenv[v] = TropicalValue(x);
        }
        INFO(to_string(e));
        CHECK(valuation(evaluate_series(e, env, 64)) == eval_trop(ultradiscretize(e), tenv));
    }
}
