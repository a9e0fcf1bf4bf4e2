#include <doctest.h>

#include <random>

#include "support.hpp"
#include "udc/discrete.hpp"
#include "udc/error.hpp"

using namespace udc;

namespace {
Rational r(long n, long d = 1) { return make_rational(n, d); }
const EpsRat E = EpsRat::eps();

const RationalMap& autonomous() {
    static RationalMap m = parse_map("vars: w0, w1\nw0' = w1\nw1' = (1 + w1)/w0\n");
    return m;
}

DiscreteConfinementReport run(std::optional<Rational> candidate, std::vector<Rational> samples) {
    DiscreteConfinementConfig c;
    c.perturb = "w1";
    c.candidate = std::move(candidate);
    c.free = "w0";
    c.samples = std::move(samples);
    c.steps = 8;
    return run_discrete_confinement(autonomous(), c);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}
}  // namespace

TEST_CASE("field arithmetic") {
    CHECK(E * (EpsRat(1) / E) == EpsRat(1));
    CHECK((EpsRat(1) + E) + EpsRat(-1) == E);
    auto f = (EpsRat(1) + E) / EpsRat(2);
    CHECK(f.num() == Poly({r(1, 2), r(1, 2)}));
    CHECK(f.den() == Poly::constant(1));
    CHECK(code_of([] { EpsRat(1) / EpsRat(); }) == ErrorCode::DivisionByZeroFunction);

    // Canonical form: lowest terms, monic denominator.
    auto g = (E * E - EpsRat(1)) / (EpsRat(2) * E - EpsRat(2));
    CHECK(g == (E + EpsRat(1)) / EpsRat(2));
    CHECK(g.den().lead() == 1);
}

TEST_CASE("orders and limits") {
    CHECK(ord0((EpsRat(3) + E) / (EpsRat(2) * E)) == -1);
    CHECK(ord0(E * E / (EpsRat(1) + E)) == 2);
    CHECK(ord0(EpsRat(5)) == 0);
    CHECK(code_of([] { ord0(EpsRat()); }) == ErrorCode::ZeroFunction);

    CHECK(limit0(EpsRat(3) / E) == std::nullopt);
    CHECK(limit0((EpsRat(1) + E) / EpsRat(2)) == r(1, 2));
    CHECK(limit0(E) == r(0));
    CHECK(limit0(EpsRat()) == r(0));
}

TEST_CASE("ord0 is additive") {
    std::mt19937 rng(4);
    auto random_er = [&] {
        std::vector<Rational> n, d;
        std::uniform_int_distribution<int> deg(0, 3);
        for (int i = 0, k = deg(rng); i <= k; ++i) n.push_back(testing::random_rational(rng, -3, 3, 2));
        for (int i = 0, k = deg(rng); i <= k; ++i) d.push_back(testing::random_rational(rng, -3, 3, 2));
        Poly pn(n), pd(d);
        if (pn.is_zero()) pn = Poly::constant(1);
        if (pd.is_zero()) pd = Poly::eps();
        return EpsRat(pn, pd);
    };
    for (int i = 0; i < 200; ++i) {
        auto f = random_er(), g = random_er();
        CHECK(ord0(f * g) == ord0(f) + ord0(g));
    }
}

TEST_CASE("confinement from w1 = 0") {
    auto rep = run(r(0), {2, 3});
    std::vector<std::vector<ProjectiveValue>> expect_w0_2 = {
        {r(2), r(0)}, {r(0), r(1, 2)}, {r(1, 2), std::nullopt}, {std::nullopt, std::nullopt}, {std::nullopt, r(2)}, {r(2), r(0)}};
    REQUIRE(rep.steps.size() == 6);
    for (std::size_t n = 0; n < 6; ++n) CHECK(rep.steps[n].limits[0] == expect_w0_2[n]);
    CHECK(rep.entry == 2u);
    CHECK(rep.confined_at == 5u);
    CHECK(rep.verdict == "confined at 5");
}

TEST_CASE("confinement from w1 = -1") {
    auto rep = run(r(-1), {2, 3});
    CHECK(rep.confined_at == 3u);
    CHECK(rep.entry == 1u);
    CHECK(!rep.steps[1].info_retained);
    CHECK(!rep.steps[2].info_retained);
    CHECK(rep.steps[3].limits[0] == std::vector<ProjectiveValue>{r(-1), r(-3)});
    CHECK(rep.steps[3].limits[1] == std::vector<ProjectiveValue>{r(-1), r(-4)});
}

TEST_CASE("confinement from w1 = infinity") {
    auto rep = run(std::nullopt, {2, 3});
    REQUIRE(rep.confined_at);
    CHECK(*rep.confined_at <= 5u);
    CHECK(rep.entry == 0u);
}

TEST_CASE("verdicts do not depend on the samples") {
    for (auto cand : {std::optional<Rational>(0), std::optional<Rational>(-1), std::optional<Rational>()}) {
        auto a = run(cand, {2, 3});
        auto b = run(cand, {r(5, 7), r(-11, 3), 13});
        CHECK(a.entry == b.entry);
        CHECK(a.confined_at == b.confined_at);
    }
}

TEST_CASE("period five over Q(eps)") {
    std::mt19937 rng(9);
    for (int i = 0; i < 20; ++i) {
        Rational a = testing::random_rational(rng), b = testing::random_rational(rng);
        if (sgn(a) == 0) a = 1;
        std::vector<EpsRat> s{EpsRat(a) + E, EpsRat(b) + E * E};
        auto cur = s;
        for (int k = 0; k < 5; ++k) cur = step_eps(autonomous(), cur, {});
        CHECK(cur == s);
    }
}

TEST_CASE("limits agree with a small concrete eps") {
    auto rep = run(r(-1), {2, 3});
    for (const auto& st : rep.steps)
        for (std::size_t smp = 0; smp < st.values.size(); ++smp)
            for (std::size_t i = 0; i < st.values[smp].size(); ++i) {
                const auto& f = st.values[smp][i];
                if (f.is_zero() || ord0(f) != 0) continue;
                double v = to_double(f.at(r(1, 1000000)));
                CHECK(v == doctest::Approx(to_double(*st.limits[smp][i])).epsilon(1e-3));
            }
}

TEST_CASE("degenerate inputs") {
    CHECK(code_of([] { run(r(0), {2}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { run(r(0), {2, 2}); }) == ErrorCode::InvalidArgument);
    // w0 = 0 divides by zero identically.
    CHECK(code_of([] { run(r(1), {0, 1}); }) == ErrorCode::IndeterminateOrbit);
    CHECK(code_of([] { iterate_exact(autonomous(), {0, 1}, {}, 2); }) == ErrorCode::IndeterminateOrbit);
    auto hits = scan_singular_candidates(autonomous(), "w0", {-1, 0, 1, 2}, {{"w1", r(-1)}});
    CHECK(hits == std::vector<Rational>{0});
}
