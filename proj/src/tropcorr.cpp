#include "udc/tropcorr.hpp"

#include <algorithm>

#include "udc/error.hpp"

namespace udc {

PuiseuxPoly::PuiseuxPoly(std::vector<PuiseuxSeries> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back().is_exact_zero()) c_.pop_back();
}

PuiseuxPoly poly_add(const PuiseuxPoly& a, const PuiseuxPoly& b) {
    std::vector<PuiseuxSeries> c(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.coeffs().size()) c[i] = ps_add(c[i], a.coeffs()[i]);
        if (i < b.coeffs().size()) c[i] = ps_add(c[i], b.coeffs()[i]);
    }
    return PuiseuxPoly(std::move(c));
}

PuiseuxPoly poly_neg(const PuiseuxPoly& a) {
    std::vector<PuiseuxSeries> c;
    for (const auto& s : a.coeffs()) c.push_back(ps_neg(s));
    return PuiseuxPoly(std::move(c));
}

PuiseuxPoly poly_mul(const PuiseuxPoly& a, const PuiseuxPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<PuiseuxSeries> c(a.coeffs().size() + b.coeffs().size() - 1);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
        for (std::size_t j = 0; j < b.coeffs().size(); ++j)
            c[i + j] = ps_add(c[i + j], ps_mul(a.coeffs()[i], b.coeffs()[j]));
    return PuiseuxPoly(std::move(c));
}

PuiseuxPoly poly_from_roots(const std::vector<PuiseuxSeries>& roots) {
    PuiseuxPoly p = PuiseuxPoly::constant(PuiseuxSeries::constant(1));
    for (const auto& r : roots) p = poly_mul(p, PuiseuxPoly({ps_neg(r), PuiseuxSeries::constant(1)}));
    return p;
}

std::string to_string(const PuiseuxPoly& p, const std::string& symbol) {
    if (p.is_zero()) return "0";
    std::string s;
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        const auto& c = p.coeffs()[i];
        if (c.is_exact_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + to_string(c) + ")";
        if (i >= 1) s += "*" + symbol;
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
}

TropicalValue TropicalPoly::operator()(const TropicalValue& x) const {
    TropicalValue acc = TropicalValue::neg_inf();
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc = trop_add(acc, trop_mul(coeffs[i], trop_scale(static_cast<long>(i), x)));
    return acc;
}

std::string to_string(const TropicalPoly& p) {
    std::string s = "max(";
    bool first = true;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (p.coeffs[i].is_neg_inf()) continue;
        if (!first) s += ", ";
        first = false;
        s += to_string(p.coeffs[i]);
        if (i == 1) s += " + X";
        if (i > 1) s += " + " + std::to_string(i) + "*X";
    }
    return first ? "-inf" : s + ")";
}

TropicalPoly tropicalize_poly(const PuiseuxPoly& p) {
    TropicalPoly t;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        try {
            t.coeffs.push_back(valuation(p.coeffs()[i]));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::IndeterminateValuation) throw;
            throw Error(ErrorCode::IndeterminateValuation, "coefficient of degree " + std::to_string(i) + " has no known term");
        }
    }
    return t;
}

namespace {

struct Pt {
    long i;
    Rational c;
};

void append_neg_inf(std::vector<TropicalValue>& out, long count) {
    for (long k = 0; k < count; ++k) out.push_back(TropicalValue::neg_inf());
}

std::vector<Pt> finite_points(const std::vector<TropicalValue>& coeffs) {
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i].is_finite()) pts.push_back({static_cast<long>(i), coeffs[i].value()});
    return pts;
}

// Cross product of (b - a) and (c - a).
Rational cross(const Pt& a, const Pt& b, const Pt& c) {
    return Rational((b.i - a.i) * (c.c - a.c) - (b.c - a.c) * (c.i - a.i));
}

}  // namespace

std::vector<TropicalValue> trop_roots(const TropicalPoly& p) {
    if (p.coeffs.size() < 2) throw Error(ErrorCode::InvalidArgument, "tropical roots need degree >= 1");
    if (p.coeffs.back().is_neg_inf()) throw Error(ErrorCode::InvalidArgument, "top coefficient is -inf");

    std::vector<Pt> pts = finite_points(p.coeffs);
    std::vector<TropicalValue> roots;
    append_neg_inf(roots, pts.front().i);

    // Monotone chain, upper hull, collinear points dropped.
    std::vector<Pt> hull;
    for (const auto& q : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), q) >= 0) hull.pop_back();
        hull.push_back(q);
    }
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long width = hull[k + 1].i - hull[k].i;
        Rational root = -(hull[k + 1].c - hull[k].c) / width;
        for (long m = 0; m < width; ++m) roots.push_back(TropicalValue(root));
    }
    return roots;
}

std::vector<TropicalValue> newton_valuations(const PuiseuxPoly& p) {
    if (p.degree() < 1) throw Error(ErrorCode::InvalidArgument, "root valuations need degree >= 1");
    std::vector<Pt> pts = finite_points(tropicalize_poly(p).coeffs);
    std::vector<TropicalValue> out;
    append_neg_inf(out, pts.front().i);

    // Gift wrapping: from the current vertex take the steepest ascent to the
    // right, preferring the farthest point on ties.
    std::size_t cur = 0;
    while (cur + 1 < pts.size()) {
        std::size_t best = cur + 1;
        Rational best_slope = (pts[best].c - pts[cur].c) / (pts[best].i - pts[cur].i);
        for (std::size_t j = cur + 2; j < pts.size(); ++j) {
            Rational s = (pts[j].c - pts[cur].c) / (pts[j].i - pts[cur].i);
            if (s >= best_slope) {
                best = j;
                best_slope = s;
            }
        }
        for (long m = 0; m < pts[best].i - pts[cur].i; ++m) out.push_back(TropicalValue(Rational(-best_slope)));
        cur = best;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<TropicalValue> distinct(std::vector<TropicalValue> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<TropicalValue> nd_values(const NdSet& s) {
    std::vector<TropicalValue> v;
    if (s.neg_inf) v.push_back(TropicalValue::neg_inf());
    for (const auto& x : s.finite) v.push_back(TropicalValue(x));
    return v;
}

std::string list_text(const std::vector<TropicalValue>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + "}";
}

}  // namespace

Lemma3Report lemma3_check(const PuiseuxPoly& num, const PuiseuxPoly& den, const PiecewiseLinearFn& f) {
    if (num.is_zero() || den.is_zero()) throw Error(ErrorCode::InvalidArgument, "numerator and denominator must be nonzero");
    Lemma3Report r;
    if (num.degree() >= 1) {
        r.num_trop_roots = trop_roots(tropicalize_poly(num));
        r.num_newton = newton_valuations(num);
    }
    if (den.degree() >= 1) {
        r.den_trop_roots = trop_roots(tropicalize_poly(den));
        r.den_newton = newton_valuations(den);
    }
    r.kapranov_ok = r.num_trop_roots == r.num_newton && r.den_trop_roots == r.den_newton;

    auto num_set = distinct(r.num_newton);
    auto den_set = distinct(r.den_newton);
    std::set_intersection(num_set.begin(), num_set.end(), den_set.begin(), den_set.end(), std::back_inserter(r.shared));
    std::set_union(num_set.begin(), num_set.end(), den_set.begin(), den_set.end(), std::back_inserter(r.root_set));
    r.nd = nd_values(nd_points(f));
    r.nd_matches = r.nd == r.root_set;

    std::vector<TropicalValue> extra, missing;
    std::set_difference(r.nd.begin(), r.nd.end(), r.root_set.begin(), r.root_set.end(), std::back_inserter(extra));
    std::set_difference(r.root_set.begin(), r.root_set.end(), r.nd.begin(), r.nd.end(), std::back_inserter(missing));
    bool missing_shared = std::includes(r.shared.begin(), r.shared.end(), missing.begin(), missing.end());

    if (!r.kapranov_ok) r.warnings.push_back("tropical roots and Newton valuations differ");
    if (!r.shared.empty())
        r.warnings.push_back("numerator and denominator share tropical roots " + list_text(r.shared) +
                             "; the difference may be smooth there");
    if (!extra.empty()) r.warnings.push_back("non-differentiable points without a root: " + list_text(extra));
    if (!missing.empty() && !missing_shared) r.warnings.push_back("roots without a non-differentiable point: " + list_text(missing));
    r.passed = r.kapranov_ok && extra.empty() && missing_shared;
    return r;
}

namespace {

struct FractionOps {
    Rational depth;

    PuiseuxPoly trunc(PuiseuxPoly p) const {
        std::vector<PuiseuxSeries> c = p.coeffs();
        for (auto& s : c) s = ps_truncate(s, depth);
        return PuiseuxPoly(std::move(c));
    }
    PolyFraction lit(const Rational& c) const {
        return {PuiseuxPoly::constant(PuiseuxSeries::constant(c)), PuiseuxPoly::constant(PuiseuxSeries::constant(1))};
    }
    PolyFraction add(const PolyFraction& a, const PolyFraction& b) const {
        if (a.den == b.den) return {trunc(poly_add(a.num, b.num)), a.den};
        return {trunc(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den))), trunc(poly_mul(a.den, b.den))};
    }
    PolyFraction neg(const PolyFraction& a) const { return {poly_neg(a.num), a.den}; }
    PolyFraction sub(const PolyFraction& a, const PolyFraction& b) const { return add(a, neg(b)); }
    PolyFraction mul(const PolyFraction& a, const PolyFraction& b) const {
        return {trunc(poly_mul(a.num, b.num)), trunc(poly_mul(a.den, b.den))};
    }
    PolyFraction div(const PolyFraction& a, const PolyFraction& b) const {
        if (b.num.is_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "division by the zero fraction");
        return {trunc(poly_mul(a.num, b.den)), trunc(poly_mul(a.den, b.num))};
    }
    PolyFraction pow(const PolyFraction& a, long k) const { return integer_power(a, k, lit(Rational(1)), *this); }
};

}  // namespace

std::vector<Lemma3Step> lemma3_orbit(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign,
                                     const std::string& free, std::size_t steps) {
    auto free_idx = m.index_of(free);
    if (!free_idx) throw Error(ErrorCode::UndeclaredName, "unknown free coordinate '" + free + "'");

    std::map<std::string, LiftSpec, std::less<>> full = assign;
    full.erase(free);
    full.erase(tropical_name(free));
    full.emplace(free, Monomial{});  // placeholder, replaced by the indeterminate
    LiftResult lifted = lift(m, full);

    TropicalMap tm = ultradiscretize(m);
    TropEnv tparams;
    for (const auto& p : m.params) tparams.emplace(p.alias, valuation(lifted.map.params().at(p.name)));
    std::vector<TropicalValue> point;
    for (std::size_t i = 0; i < m.state.size(); ++i)
        point.push_back(i == *free_idx ? TropicalValue(0) : valuation(lifted.initial[i]));
    auto pl = pl_orbit(tm, point, tparams, *free_idx, steps);

    FractionOps ops{Rational(kDefaultWindowDepth)};
    std::vector<PolyFraction> state;
    for (std::size_t i = 0; i < m.state.size(); ++i) {
        if (i == *free_idx)
            state.push_back({PuiseuxPoly::x(), PuiseuxPoly::constant(PuiseuxSeries::constant(1))});
        else
            state.push_back({PuiseuxPoly::constant(lifted.initial[i]), PuiseuxPoly::constant(PuiseuxSeries::constant(1))});
    }

    std::vector<Lemma3Step> out;
    for (std::size_t n = 0;; ++n) {
        for (std::size_t i = 0; i < m.state.size(); ++i)
            out.push_back({n, m.state[i], state[i], pl[n][i], lemma3_check(state[i].num, state[i].den, pl[n][i])});
        if (n == steps) break;
        auto lookup = [&](const std::string& name) -> PolyFraction {
            if (auto i = m.index_of(name)) return state[*i];
            return {PuiseuxPoly::constant(lifted.map.params().at(name)), PuiseuxPoly::constant(PuiseuxSeries::constant(1))};
        };
        std::vector<PolyFraction> next;
        for (const auto& u : m.updates) next.push_back(evaluate<PolyFraction>(u, lookup, ops));
        state = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------

bool CorrespondenceStep::all_equal() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.equal; });
}

CorrespondenceReport orbit_compare(const RationalMap& m, const std::map<std::string, LiftSpec, std::less<>>& assign,
                                   std::size_t steps, const Rational& depth) {
    LiftResult lifted = lift(m, assign, depth);
    TropicalMap tm = ultradiscretize(m);

    TropEnv tparams;
    for (const auto& p : m.params) tparams.emplace(p.alias, valuation(lifted.map.params().at(p.name)));
    std::vector<TropicalValue> tinit;
    for (const auto& s : lifted.initial) tinit.push_back(valuation(s));

    CorrespondenceReport report;
    report.coordinates = m.state;

    std::optional<std::vector<PuiseuxSeries>> cur = lifted.initial;
    std::string stop_reason;
    std::vector<TropicalValue> tcur = tinit;
    bool tropical_alive = true;
    std::string tropical_stop;

    for (std::size_t n = 0; n <= steps; ++n) {
        CorrespondenceStep st;
        st.n = n;
        for (std::size_t i = 0; i < m.state.size(); ++i) {
            CorrespondenceEntry e;
            e.coordinate = m.state[i];
            e.tropical = tropical_alive ? tcur[i] : TropicalValue::neg_inf();
            if (cur) {
                e.lifted = (*cur)[i];
                try {
                    e.valuation = valuation((*cur)[i]);
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::IndeterminateValuation) throw;
                    e.note = "window exhausted";
                }
            } else {
                e.note = stop_reason;
            }
            if (!tropical_alive) e.note = tropical_stop;
            e.equal = tropical_alive && e.valuation && *e.valuation == e.tropical;
            st.entries.push_back(std::move(e));
        }
        if (!st.all_equal() && !report.first_divergence) report.first_divergence = n;

        report.steps.push_back(std::move(st));
        if (n == steps) break;

        if (tropical_alive) {
            try {
                tcur = step(tm, tcur, tparams);
            } catch (const Error& err) {
                tropical_alive = false;
                tropical_stop = std::string("tropical orbit stopped: ") + err.what();
            }
        }
        if (cur) {
            try {
                cur = lifted.map.step(*cur);
            } catch (const Error& err) {
                if (err.code() != ErrorCode::DivisionByZeroSeries && err.code() != ErrorCode::IndeterminateLeadingTerm)
                    throw;
                stop_reason = std::string("lifted orbit stopped at step ") + std::to_string(n + 1) + ": " + err.what();
                report.notes.push_back(stop_reason);
                cur.reset();
            }
        }
    }

    // Consistency: every pair of consecutive all-equal steps must satisfy the tropical recurrence.
    for (std::size_t n = 0; n + 1 < report.steps.size(); ++n) {
        const auto& a = report.steps[n];
        const auto& b = report.steps[n + 1];
        if (!a.all_equal() || !b.all_equal()) continue;
        std::vector<TropicalValue> va, vb;
        for (const auto& e : a.entries) va.push_back(*e.valuation);
        for (const auto& e : b.entries) vb.push_back(*e.valuation);
        try {
            if (step(tm, va, tparams) != vb) report.recurrence_consistent = false;
        } catch (const Error&) {
            report.recurrence_consistent = false;
        }
    }

    if (is_shift_map(tm)) {
        report.scalar = true;
        const auto& first = report.steps.front().entries;
        report.scalar_valuations.push_back(first[0].valuation);
        report.scalar_tropical.push_back(first[0].tropical);
        for (const auto& st : report.steps) {
            report.scalar_valuations.push_back(st.entries[1].valuation);
            report.scalar_tropical.push_back(st.entries[1].tropical);
        }
        for (std::size_t k = 0; k < report.scalar_tropical.size(); ++k) {
            const auto& v = report.scalar_valuations[k];
            if (!v || *v != report.scalar_tropical[k]) {
                report.first_scalar_divergence = k;
                break;
            }
        }
    }
    return report;
}

}  // namespace udc
