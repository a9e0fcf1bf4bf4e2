#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"
#include "udc/error.hpp"
#include "udc/ultra.hpp"

using namespace udc;

namespace {
Rational r(long n, long d = 1) { return make_rational(n, d); }
TropicalValue t(long n, long d = 1) { return TropicalValue(make_rational(n, d)); }

const TropicalMap& phi() {
    static TropicalMap m = parse_tropical_map("kind: tropical\nvars: X, Y\nX' = Y\nY' = max(0, Y) - X\n");
    return m;
}

const TropicalMap& udp1(int k) {
    static std::map<int, TropicalMap> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        std::string text = "kind: tropical\nvars: X, Y, T\nparams: A, Q\nX' = Y\nY' = max(A + T + Y, 0) - X - " +
                           std::to_string(k) + "*Y\nT' = T + Q\n";
        it = cache.emplace(k, parse_tropical_map(text)).first;
    }
    return it->second;
}

std::vector<SignedJet> scalar_jets(const TropicalValue& w0, JetSign s, std::size_t steps) {
    return scalar_sequence(jet_orbit(phi(), {w0, t(0)}, {}, 1, s, steps));
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

TEST_CASE("jet operations") {
    SignedJet a(t(0), 0, JetSign::Plus), b(t(0), 1, JetSign::Plus);
    CHECK(jet_max(a, b) == b);
    SignedJet am(t(0), 0, JetSign::Minus), bm(t(0), 1, JetSign::Minus);
    CHECK(jet_max(am, bm) == am);
    CHECK(jet_max(SignedJet(t(3), -5, JetSign::Plus), SignedJet(t(1), 100, JetSign::Plus)).slope() == -5);
    CHECK(code_of([&] { jet_max(a, bm); }) == ErrorCode::SignMismatch);
    CHECK(code_of([&] { jet_minus(a, SignedJet(TropicalValue::neg_inf(), 0, JetSign::Plus)); }) == ErrorCode::DivisionByBottom);
    CHECK(SignedJet(TropicalValue::neg_inf(), 7, JetSign::Plus).slope() == 0);
    CHECK(to_string(SignedJet(t(3), -1, JetSign::Plus)) == "3 - d");
    CHECK(to_string(SignedJet(t(0), 1, JetSign::Plus)) == "d");
    CHECK(to_string(SignedJet(t(-1, 2), 2, JetSign::Plus)) == "-1/2 + 2*d");
}

TEST_CASE("jet orbits at W0 = 3 and W0 = -2") {
    auto plus = scalar_jets(t(3), JetSign::Plus, 5);
    std::vector<std::pair<long, long>> expect_plus{{3, 0}, {0, 1}, {-3, 1}, {0, -1}, {3, -1}, {3, 0}, {0, 1}};
    REQUIRE(plus.size() == 7);
    for (std::size_t n = 0; n < 7; ++n) {
        CHECK(plus[n].base() == t(expect_plus[n].first));
        CHECK(plus[n].slope() == expect_plus[n].second);
    }
    auto minus = scalar_jets(t(3), JetSign::Minus, 5);
    CHECK(minus[2].base() == t(-3));
    CHECK(minus[2].slope() == 0);
    CHECK(minus[3].base() == t(0));
    CHECK(minus[3].slope() == -1);

    auto neg = scalar_jets(t(-2), JetSign::Plus, 5);
    CHECK(neg[3].base() == t(2));
    CHECK(neg[3].slope() == 0);
}

TEST_CASE("table of one-sided iterates matches the closed forms") {
    // Closed forms in W0 and d, evaluated at a small concrete d of each sign.
    auto mx = [](const Rational& a, const Rational& b) { return a > b ? a : b; };
    for (Rational w0 : {r(-3), r(-1, 2), r(1, 2), r(3)}) {
        for (Rational d : {r(1, 1000), r(-1, 1000)}) {
            bool pos = sgn(d) > 0;
            std::vector<Rational> closed = {
                w0,
                d,
                pos ? Rational(d - w0) : Rational(-w0),
                pos ? mx(-d, -w0) : Rational(mx(0, -w0) - d),
                Rational(mx(0, w0) - d),
                w0,
                d,
            };
            auto jets = scalar_jets(TropicalValue(w0), pos ? JetSign::Plus : JetSign::Minus, 5);
            for (std::size_t n = 0; n < closed.size(); ++n) {
                INFO("W0 = " << to_string(w0) << ", d = " << to_string(d) << ", n = " << n);
                CHECK(jets[n].at(d) == TropicalValue(closed[n]));
            }
        }
    }
}

TEST_CASE("differentiability reports") {
    auto rep = differentiability_report(phi(), {t(3), t(0)}, {}, 1, 8);
    CHECK(rep.first_nd == 1u);
    CHECK(rep.confined_at == 3u);
    CHECK(rep.verdict == "confined at 3");
    // W2 is coordinate Y of state 1, W3 is Y of state 2.
    CHECK(!rep.steps[1].coords[1].differentiable);
    CHECK(rep.steps[2].coords[1].differentiable);
    CHECK(rep.steps[2].coords[1].left.slope() == -1);

    auto neg = differentiability_report(phi(), {t(-2), t(0)}, {}, 1, 8);
    CHECK(!neg.steps[2].coords[1].differentiable);
    CHECK(neg.steps[2].coords[1].right.slope() == 0);
    CHECK(neg.steps[2].coords[1].left.slope() == -1);
    CHECK(neg.steps[3].coords[1].differentiable);
    CHECK(neg.confined_at == 4u);

    for (Rational w0 : {r(-5), r(0), r(7, 2)}) {
        auto rp = differentiability_report(phi(), {TropicalValue(w0), t(0)}, {}, 1, 8);
        const auto& w5 = rp.steps[4].coords[1];  // Y of state 4 is W5
        CHECK(w5.differentiable);
        CHECK(w5.right.base() == TropicalValue(w0));
        CHECK(w5.right.slope() == 0);
    }

    auto smooth = differentiability_report(phi(), {t(3), t(5)}, {}, 1, 8);
    CHECK(!smooth.first_nd);
    CHECK(smooth.confined());
}

TEST_CASE("large-parameter orbits") {
    auto w = scalar_sequence(large_orbit(phi(), {t(7, 3), t(0)}, {}, 1, 5));
    std::vector<LargeJet> expect{LargeJet(0, r(7, 3)), LargeJet(-1, 0), LargeJet(0, r(-7, 3)),
                                 LargeJet(1, 0),        LargeJet(1, r(7, 3)), LargeJet(0, r(7, 3)),
                                 LargeJet(-1, 0)};
    CHECK(w == expect);
    auto m = scalar_sequence(large_orbit(phi(), {t(-2), t(0)}, {}, 1, 5));
    CHECK(m[3] == LargeJet(1, 2));
    CHECK(m[4] == LargeJet(1, 0));
    CHECK(LargeJet(1, -100) > LargeJet(0, 100));
    CHECK(LargeJet::neg_inf() < LargeJet(-5, 0));
    CHECK(to_string(LargeJet(1, r(7, 3))) == "7/3 + L");
}

TEST_CASE("piecewise-linear calculus") {
    auto x = PiecewiseLinearFn::identity();
    auto zero = PiecewiseLinearFn::constant(0);
    auto f = pl_max(zero, x);
    CHECK(f.breakpoints() == std::vector<Rational>{0});
    CHECK(f.slopes() == std::vector<Rational>{0, 1});
    CHECK(pl_minus(pl_plus(f, x), x) == f);

    // A crossing strictly between knots is found.
    auto g = PiecewiseLinearFn::from_knots({{0, 0}, {2, 4}}, 0, 0);
    auto h = PiecewiseLinearFn::constant(1);
    auto mx = pl_max(g, h);
    CHECK(mx.breakpoints() == std::vector<Rational>{r(1, 2), 2});
    CHECK(mx.value_at(r(1, 4)) == t(1));

    // Knots that do not change the slope disappear.
    auto lin = PiecewiseLinearFn::from_knots({{-1, -1}, {0, 0}, {5, 5}}, 1, 1);
    CHECK(lin == x);
    CHECK(lin.is_affine());

    CHECK(pl_scale(-2, f).slopes() == std::vector<Rational>{0, -2});
    CHECK(pl_max(PiecewiseLinearFn::bottom(), f) == f);
    CHECK(code_of([&] { pl_minus(f, PiecewiseLinearFn::bottom()); }) == ErrorCode::DivisionByBottom);
}

TEST_CASE("max envelope against pointwise evaluation") {
    std::mt19937 rng(21);
    auto random_pl = [&] {
        std::vector<PiecewiseLinearFn::Knot> k;
        std::uniform_int_distribution<int> n(1, 4);
        for (int i = 0, m = n(rng); i < m; ++i) k.push_back({testing::random_rational(rng, -5, 5, 3), testing::random_rational(rng)});
        std::sort(k.begin(), k.end(), [](auto& a, auto& b) { return a.x < b.x; });
        k.erase(std::unique(k.begin(), k.end(), [](auto& a, auto& b) { return a.x == b.x; }), k.end());
        return PiecewiseLinearFn::from_knots(k, testing::random_rational(rng, -2, 2, 2), testing::random_rational(rng, -2, 2, 2));
    };
    for (int i = 0; i < 200; ++i) {
        auto f = random_pl(), g = random_pl();
        auto m = pl_max(f, g);
        for (int j = -40; j <= 40; ++j) {
            Rational x = r(j, 4);
            CHECK(m.value_at(x) == std::max(f.value_at(x), g.value_at(x)));
        }
        // Canonical: adjacent slopes differ.
        auto s = m.slopes();
        for (std::size_t k = 0; k + 1 < s.size(); ++k) CHECK(s[k] != s[k + 1]);
    }
}

TEST_CASE("iterates as functions of W1 and their ND points") {
    auto pl = pl_orbit(phi(), {t(2), t(0)}, {}, 1, 6);
    auto w = scalar_sequence(pl);
    auto w2 = w[2];
    CHECK(w2.breakpoints() == std::vector<Rational>{0});
    CHECK(w2.slopes() == std::vector<Rational>{0, 1});
    CHECK(w2.value_at(0) == t(-2));

    // W3 = max(0, W0, W1) - W0 - W1 at W0 = 2.
    for (int j = -20; j <= 20; ++j) {
        Rational w1 = r(j, 3);
        Rational expect = std::max({Rational(0), Rational(2), w1}) - 2 - w1;
        CHECK(w[3].value_at(w1) == TropicalValue(expect));
    }
    CHECK(w[4].is_affine());
    CHECK(w[4].left_slope() == -1);

    std::vector<NdSet> nd;
    for (std::size_t n = 0; n <= 6; ++n) nd.push_back(nd_points(w[n]));
    CHECK(nd[0] == NdSet{{}, false});
    CHECK(nd[1] == NdSet{{}, true});
    CHECK(nd[2] == NdSet{{0}, false});
    CHECK(nd[3] == NdSet{{2}, true});
    CHECK(nd[4] == NdSet{{}, true});
    CHECK(nd[5] == NdSet{{}, false});
    CHECK(nd[6] == NdSet{{}, true});
    CHECK(to_string(nd[3]) == "{2, -inf}");
    CHECK(to_string(nd[0]) == "{}");
}

TEST_CASE("continuity of every iterate") {
    for (Rational w0 : {r(-2), r(0), r(2), r(9, 4)}) {
        for (const auto& state : pl_orbit(phi(), {TropicalValue(w0), t(0)}, {}, 1, 10))
            for (const auto& f : state)
                for (const auto& b : f.breakpoints()) {
                    Rational h = r(1, 1000000);
                    auto left = f.value_at(b - h).value(), right = f.value_at(b + h).value();
                    auto mid = f.value_at(b).value();
                    CHECK(mid - left == f.slope_left_of(b) * h);
                    CHECK(right - mid == f.slope_right_of(b) * h);
                }
    }
}

TEST_CASE("piecewise-linear slopes agree with jets") {
    for (Rational w0 : {r(-2), r(0), r(3, 2)}) {
        for (Rational p : {r(-1), r(0), r(1, 2), r(3, 2)}) {
            auto pl = pl_orbit(phi(), {TropicalValue(w0), t(0)}, {}, 1, 8);
            auto jp = jet_orbit(phi(), {TropicalValue(w0), TropicalValue(p)}, {}, 1, JetSign::Plus, 8);
            auto jm = jet_orbit(phi(), {TropicalValue(w0), TropicalValue(p)}, {}, 1, JetSign::Minus, 8);
            for (std::size_t n = 0; n <= 8; ++n)
                for (std::size_t i = 0; i < 2; ++i) {
                    CHECK(pl[n][i].slope_right_of(p) == jp[n][i].slope());
                    CHECK(pl[n][i].slope_left_of(p) == jm[n][i].slope());
                    CHECK(pl[n][i].value_at(p) == jp[n][i].base());
                }
        }
    }
}

TEST_CASE("ND points coincide with flagged points over a breakpoint scan") {
    Rational w0 = 2;
    auto pl = pl_orbit(phi(), {TropicalValue(w0), t(0)}, {}, 1, 8);
    std::set<Rational> candidates;
    for (const auto& s : pl)
        for (const auto& f : s)
            for (const auto& b : f.breakpoints()) candidates.insert(b);
    candidates.insert(r(7, 3));
    for (const auto& p : candidates) {
        auto rep = differentiability_report(phi(), {TropicalValue(w0), TropicalValue(p)}, {}, 1, 8);
        for (std::size_t n = 0; n <= 8; ++n)
            for (std::size_t i = 0; i < 2; ++i) {
                auto bps = nd_points(pl[n][i]).finite;
                bool is_nd = std::find(bps.begin(), bps.end(), p) != bps.end();
                CHECK(is_nd == !rep.steps[n].coords[i].differentiable);
            }
    }
}

TEST_CASE("jets are exact for small perturbations") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        bool use_p1 = trial % 2 == 1;
        const TropicalMap& m = use_p1 ? udp1(trial % 3) : phi();
        std::vector<TropicalValue> pt;
        for (std::size_t i = 0; i < m.state.size(); ++i) pt.push_back(TropicalValue(testing::random_rational(rng, -3, 3, 2)));
        if (trial % 4 == 0) pt[1] = t(0);
        TropEnv params;
        if (use_p1) params = {{"A", t(1, 2)}, {"Q", t(-1, 3)}};
        for (JetSign s : {JetSign::Plus, JetSign::Minus}) {
            auto jets = jet_orbit(m, pt, params, 1, s, 6);
            bool agree_prev = false, found = false;
            for (int k = 4; k <= 12 && !found; ++k) {
                Rational d = r(1, 1L << k);
                if (s == JetSign::Minus) d = -d;
                auto p = pt;
                p[1] = TropicalValue(Rational(p[1].value() + d));
                auto plain = orbit(m, p, params, 6);
                bool agree = true;
                for (std::size_t n = 0; n <= 6; ++n)
                    for (std::size_t i = 0; i < pt.size(); ++i)
                        if (plain[n][i] != jets[n][i].at(d)) agree = false;
                found = agree && agree_prev;
                agree_prev = agree;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("period five of the tropical map") {
    std::mt19937 rng(17);
    for (int i = 0; i < 200; ++i) {
        std::vector<TropicalValue> p{TropicalValue(testing::random_rational(rng)), TropicalValue(testing::random_rational(rng))};
        CHECK(orbit(phi(), p, {}, 5)[5] == p);
    }
}
