// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "udc/cli.hpp"
#include "udc/discrete.hpp"
#include "udc/error.hpp"
#include "udc/tropcorr.hpp"

using namespace udc;

namespace {

Rational r(long n, long d = 1) { return make_rational(n, d); }
TropicalValue tv(const Rational& x) { return TropicalValue(x); }
Rational rmax(const Rational& a, const Rational& b) { return a > b ? a : b; }

const RationalMap& autonomous() {
    static RationalMap m = *cli::load_map("autonomous").rational;
    return m;
}
const TropicalMap& ud_autonomous() {
    static TropicalMap m = *cli::load_map("ud-autonomous").tropical;
    return m;
}

// Collects the first few mismatches of one criterion.
struct Check {
    int failures = 0;
    std::ostringstream detail;
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures++ < 3) detail << (failures > 1 ? "; " : "") << what;
    }
};

using Criterion = std::function<void(Check&)>;

void c1_period_five(Check& c) {
    std::mt19937 rng(1);
    int done = 0;
    while (done < 200) {
        std::vector<Rational> s{testing::random_rational(rng), testing::random_rational(rng)};
        std::vector<std::vector<Rational>> orb;
        try {
            orb = iterate_exact(autonomous(), s, {}, 5);
        } catch (const Error&) {
            continue;  // the orbit meets w0 = 0; draw again
        }
        c.expect(orb[5] == s, "rational orbit does not return");
        std::vector<EpsRat> e{EpsRat(s[0]), EpsRat(s[1])};
        auto cur = e;
        for (int k = 0; k < 5; ++k) cur = step_eps(autonomous(), cur, {});
        c.expect(cur == e, "Q(eps) orbit does not return");
        std::vector<TropicalValue> p{tv(s[0]), tv(s[1])};
        c.expect(orbit(ud_autonomous(), p, {}, 5)[5] == p, "tropical orbit does not return");
        ++done;
    }
}

void c2_table_one(Check& c) {
    for (Rational w0 : {r(-3), r(-1, 2), r(1, 2), r(3)}) {
        auto plus = scalar_sequence(jet_orbit(ud_autonomous(), {tv(w0), tv(0)}, {}, 1, JetSign::Plus, 5));
        auto minus = scalar_sequence(jet_orbit(ud_autonomous(), {tv(w0), tv(0)}, {}, 1, JetSign::Minus, 5));
        std::vector<Rational> flat{w0, 0, -w0, rmax(0, -w0), rmax(0, w0), w0, 0};
        for (std::size_t n = 0; n <= 6; ++n) {
            c.expect(plus[n].base() == tv(flat[n]), "d = 0 column differs");
            c.expect(minus[n].base() == tv(flat[n]), "d = 0 column differs");
        }
        // Closed forms, checked at both a small d and the jet slope.
        for (Rational d : {r(1, 1000), r(-1, 1000)}) {
            bool pos = sgn(d) > 0;
            std::vector<Rational> closed{w0,
                                         d,
                                         pos ? Rational(d - w0) : Rational(-w0),
                                         pos ? rmax(-d, -w0) : Rational(rmax(0, -w0) - d),
                                         Rational(rmax(0, w0) - d),
                                         w0,
                                         d};
            const auto& jets = pos ? plus : minus;
            for (std::size_t n = 0; n <= 6; ++n)
                c.expect(jets[n].at(d) == tv(closed[n]),
                         "W0 = " + to_string(w0) + ", n = " + std::to_string(n) + ": " + to_string(jets[n]));
        }
    }
}

void c3_table_two(Check& c) {
    auto w = scalar_sequence(pl_orbit(ud_autonomous(), {tv(2), tv(0)}, {}, 1, 5));
    std::vector<NdSet> expect{{{}, false}, {{}, true}, {{0}, false}, {{2}, true}, {{}, true}, {{}, false}, {{}, true}};
    for (std::size_t n = 0; n <= 6; ++n)
        c.expect(nd_points(w[n]) == expect[n], "n = " + std::to_string(n) + ": " + to_string(nd_points(w[n])));
}

void c4_large_table(Check& c) {
    for (Rational w0 : {r(7, 3), r(-2)}) {
        auto got = scalar_sequence(large_orbit(ud_autonomous(), {tv(w0), tv(0)}, {}, 1, 5));
        std::vector<LargeJet> expect{LargeJet(0, w0),
                                     LargeJet(-1, 0),
                                     LargeJet(0, -w0),
                                     LargeJet(1, rmax(w0, 0) - w0),
                                     LargeJet(1, rmax(0, w0)),
                                     LargeJet(0, w0),
                                     LargeJet(-1, 0)};
        for (std::size_t n = 0; n <= 6; ++n)
            c.expect(got[n] == expect[n], "W0 = " + to_string(w0) + ", n = " + std::to_string(n) + ": " + to_string(got[n]));
    }
}

void c5_discrete(Check& c) {
    DiscreteConfinementConfig cfg;
    cfg.perturb = "w1";
    cfg.free = "w0";
    cfg.samples = {2, 3, r(-5, 7)};
    cfg.steps = 8;

    cfg.candidate = Rational(0);
    auto zero = run_discrete_confinement(autonomous(), cfg);
    c.expect(zero.confined(), "w1@0 not confined");
    for (std::size_t s = 0; s < cfg.samples.size(); ++s) {
        const Rational& w = cfg.samples[s];
        std::vector<std::vector<ProjectiveValue>> pattern{
            {w, r(0)}, {r(0), Rational(1 / w)}, {Rational(1 / w), std::nullopt}, {std::nullopt, std::nullopt}, {std::nullopt, w}, {w, r(0)}};
        for (std::size_t n = 0; n < pattern.size(); ++n)
            c.expect(n < zero.steps.size() && zero.steps[n].limits[s] == pattern[n], "w1@0 limit pattern at step " + std::to_string(n));
    }

    cfg.candidate = Rational(-1);
    auto m1 = run_discrete_confinement(autonomous(), cfg);
    c.expect(m1.confined_at == 3u, "w1@-1 not confined at 3");
    c.expect(m1.steps.size() > 2 && !m1.steps[1].info_retained && !m1.steps[2].info_retained, "w1@-1 keeps information at 1-2");
    c.expect(m1.steps.size() > 3 && m1.steps[3].info_retained, "w1@-1 step 3 loses information");

    cfg.candidate.reset();
    auto inf = run_discrete_confinement(autonomous(), cfg);
    c.expect(inf.confined_at && *inf.confined_at <= 5, "w1@inf not confined within 5");
}

PuiseuxSeries random_series(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(1, 4);
    std::bernoulli_distribution truncated(0.5);
    std::vector<SeriesTerm> t;
    for (int i = 0, n = nterms(rng); i < n; ++i) {
        Rational a = testing::random_rational(rng, -3, 3, 3);
        if (sgn(a) == 0) a = 1;
        t.push_back({testing::random_rational(rng, -6, 6, 4), a});
    }
    auto f = PuiseuxSeries::from_terms(t);
    if (truncated(rng) && !f.terms().empty())
        f = PuiseuxSeries::from_terms(f.terms(), f.terms().back().exponent - testing::random_rational(rng, 0, 3, 2));
    return f;
}

void c6_valuation_laws(Check& c) {
    std::mt19937 rng(6);
    for (int i = 0; i < 500; ++i) {
        auto f = random_series(rng), g = random_series(rng);
        auto vf = valuation(f), vg = valuation(g);
        c.expect(valuation(ps_mul(f, g)) == trop_mul(vf, vg), "product law");
        auto s = ps_add(f, g);
        try {
            auto vs = valuation(s);
            c.expect(vs <= trop_add(vf, vg), "sum bound");
            if (vf != vg) c.expect(vs == trop_add(vf, vg), "sum equality");
        } catch (const Error& e) {
            // Only a full cancellation of the known terms may make it indeterminate.
            c.expect(e.code() == ErrorCode::IndeterminateValuation && vf == vg, "unexpected error");
        }
    }
}

const std::vector<std::string> kVars{"a", "b", "c", "d"};

void c7_lemma_two(Check& c) {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        auto e = testing::random_sf_expr(rng, kVars, 6);
        std::map<std::string, PuiseuxSeries, std::less<>> env;
        TropEnv tenv;
        for (const auto& v : kVars) {
            Rational x = testing::random_rational(rng, -5, 5, 4);
            env[v] = PuiseuxSeries::monomial(1, x);
            tenv[v] = tv(x);
        }
        c.expect(valuation(evaluate_series(e, env, 64)) == eval_trop(ultradiscretize(e), tenv), to_string(e));
    }
}

void c8_lemma_one(Check& c) {
    std::mt19937 rng(7);
    std::vector<Rational> eps{r(1, 10), r(1, 100), r(1, 1000)};
    for (int i = 0; i < 100; ++i) {
        auto e = testing::random_sf_expr(rng, kVars, 6);
        TropEnv tenv;
        for (const auto& v : kVars) tenv[v] = tv(testing::random_rational(rng, -5, 5, 4));
        auto devs = numeric_ud_check(e, tenv, eps);
        double logn = std::log(static_cast<double>(node_count(e)));
        for (std::size_t k = 0; k < devs.size(); ++k) {
            if (!devs[k].deviation) {
                c.expect(false, "no deviation for " + to_string(e) + ": " + devs[k].error);
                continue;
            }
            c.expect(*devs[k].deviation <= devs[k].epsilon * logn + 1e-12,
                     to_string(e) + " at eps " + std::to_string(devs[k].epsilon) + ": " + std::to_string(*devs[k].deviation) +
                         " > " + std::to_string(devs[k].epsilon * logn));
            if (k > 0 && devs[k - 1].deviation)
                c.expect(*devs[k].deviation <= *devs[k - 1].deviation + 1e-12, "not decreasing for " + to_string(e));
        }
    }
}

void c9_kapranov(Check& c) {
    std::mt19937 rng(9);
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> nroots(1, 5);
        std::vector<PuiseuxSeries> roots;
        std::vector<TropicalValue> chosen;
        for (int k = 0, n = nroots(rng); k < n; ++k) {
            Rational a = testing::random_rational(rng, -3, 3, 3);
            if (sgn(a) == 0) a = -1;
            Rational q = testing::random_rational(rng, -4, 4, 3);
            roots.push_back(PuiseuxSeries::monomial(a, q));
            chosen.push_back(tv(q));
        }
        std::sort(chosen.begin(), chosen.end());
        auto p = poly_from_roots(roots);
        c.expect(trop_roots(tropicalize_poly(p)) == chosen, "trop_roots for " + to_string(p));
        c.expect(newton_valuations(p) == chosen, "newton_valuations for " + to_string(p));
    }

    std::vector<NdSet> expect{{{}, false}, {{}, true}, {{0}, false}, {{2}, true}, {{}, true}, {{}, false}, {{}, true}};
    auto steps = lemma3_orbit(autonomous(), {{"w0", Monomial{1, 2}}}, "w1", 6);
    for (const auto& st : steps) {
        c.expect(st.report.passed, "roots and ND points disagree at n = " + std::to_string(st.n));
        if (st.coordinate == "w0")
            c.expect(nd_points(st.tropical) == expect[st.n], "ND set at n = " + std::to_string(st.n));
    }
}

void c10_correspondence(Check& c) {
    auto a = orbit_compare(autonomous(), {{"w0", Monomial{1, r(5, 2)}}, {"w1", Monomial{1, -8}}}, 6);
    c.expect(a.scalar && !a.first_scalar_divergence && a.equal(), "z^(5/2), z^-8 diverges");
    auto b = orbit_compare(autonomous(), {{"w0", Monomial{1, r(5, 2)}}, {"w1", Monomial{-1, r(1, 64)}}}, 6);
    c.expect(b.scalar && !b.first_scalar_divergence && b.equal(), "z^(5/2), -z^(1/64) diverges");
    auto d = orbit_compare(autonomous(), {{"w0", Monomial{1, r(-5, 2)}}, {"w1", PuiseuxSeries::constant(-1)}}, 6);
    std::string got = d.first_scalar_divergence ? std::to_string(*d.first_scalar_divergence) : "none";
    c.expect(d.first_scalar_divergence == 3u, "W1 = -1, W0 = -5/2: expected first divergence at n = 3, got n = " + got);
}

void c11_nonautonomous(Check& c) {
    std::mt19937 rng(11);
    for (int k = 0; k <= 2; ++k) {
        std::string ks = std::to_string(k);
        auto tm = *cli::load_map("udp1-sigma" + ks).tropical;
        auto rm = *cli::load_map("qp1-sigma" + ks).rational;
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<TropicalValue> init;
            for (std::size_t i = 0; i < tm.state.size(); ++i) init.push_back(tv(testing::random_rational(rng, -3, 3, 2)));
            TropEnv params{{"A", tv(testing::random_rational(rng, -2, 2, 2))}, {"Q", tv(testing::random_rational(rng, -1, 1, 3))}};
            try {
                auto cur = init;
                for (int n = 0; n < 10000; ++n) cur = step(tm, cur, params);
            } catch (const Error& e) {
                c.expect(false, "udp1-sigma" + ks + " tropical: " + e.what());
            }

            std::map<std::string, LiftSpec, std::less<>> assign;
            for (const char* name : {"x", "y", "t", "a", "q"})
                assign[name] = Monomial{testing::random_rational(rng, 1, 4, 3) + r(1, 7), testing::random_rational(rng, -2, 2, 2)};
            try {
                // A short window keeps 100 lifted steps within the time budget; leading terms never cancel here.
                auto rep = orbit_compare(rm, assign, 100, 16);
                std::string at = rep.first_divergence ? std::to_string(*rep.first_divergence) : "";
                c.expect(rep.equal(), "qp1-sigma" + ks + " valuation diverges at step " + at);
            } catch (const Error& e) {
                c.expect(false, "qp1-sigma" + ks + " lifted: " + e.what());
            }
        }
    }
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, Criterion>> criteria{
        {"1 period-5 identities", c1_period_five},
        {"2 one-sided iterates table", c2_table_one},
        {"3 ND sets at W0 = 2", c3_table_two},
        {"4 large-parameter table", c4_large_table},
        {"5 discrete confinement verdicts", c5_discrete},
        {"6 valuation laws", c6_valuation_laws},
        {"7 lifted evaluation vs ultradiscretization", c7_lemma_two},
        {"8 numeric limit", c8_lemma_one},
        {"9 Kapranov and roots vs ND points", c9_kapranov},
        {"10 correspondence and cancellation", c10_correspondence},
        {"11 nonautonomous robustness", c11_nonautonomous},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        auto start = std::chrono::steady_clock::now();
        try {
            run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("uncaught: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.expect(secs < 5.0, "took " + std::to_string(secs) + " s");
        std::ostringstream line;
        line.precision(3);
        line << (c.failures ? "FAIL" : "PASS") << " criterion " << name << " (" << std::fixed << secs << " s)";
        if (c.failures) line << ": " << c.detail.str();
        std::cout << line.str() << std::endl;
        if (c.failures) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
