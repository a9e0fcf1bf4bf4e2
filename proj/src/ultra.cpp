#include "udc/ultra.hpp"

#include <algorithm>

#include "udc/error.hpp"

namespace udc {

std::string to_string(JetSign s) {
    return s == JetSign::Plus ? "+" : "-";
}

// ---------------------------------------------------------------------------
// SignedJet

SignedJet::SignedJet(TropicalValue base, Rational slope, JetSign sign)
    : base_(std::move(base)), slope_(std::move(slope)), sign_(sign) {
    if (base_.is_neg_inf()) slope_ = 0;
}

TropicalValue SignedJet::at(const Rational& d) const {
    if (base_.is_neg_inf()) return base_;
    return TropicalValue(Rational(base_.value() + slope_ * d));
}

namespace {
void same_sign(const SignedJet& a, const SignedJet& b) {
    if (a.sign() != b.sign()) throw Error(ErrorCode::SignMismatch, "jets carry different perturbation signs");
}
}  // namespace

SignedJet jet_max(const SignedJet& a, const SignedJet& b) {
    same_sign(a, b);
    if (a.base() != b.base()) return a.base() > b.base() ? a : b;
    if (a.sign() == JetSign::Plus) return a.slope() >= b.slope() ? a : b;
    return a.slope() <= b.slope() ? a : b;
}

SignedJet jet_plus(const SignedJet& a, const SignedJet& b) {
    same_sign(a, b);
    return SignedJet(trop_mul(a.base(), b.base()), a.slope() + b.slope(), a.sign());
}

SignedJet jet_minus(const SignedJet& a, const SignedJet& b) {
    same_sign(a, b);
    return SignedJet(trop_div(a.base(), b.base()), a.slope() - b.slope(), a.sign());
}

SignedJet jet_scale(long k, const SignedJet& a) {
    return SignedJet(trop_scale(k, a.base()), a.slope() * k, a.sign());
}

namespace {

// `base + slope*sym` with the usual sign folding.
std::string affine_text(const std::optional<Rational>& base, const Rational& slope, const std::string& sym) {
    if (!base) return "-inf";
    std::string s;
    bool has_base = sgn(*base) != 0 || sgn(slope) == 0;
    if (has_base) s = to_string(*base);
    if (sgn(slope) != 0) {
        Rational mag = abs(slope);
        std::string term = (mag == 1 ? std::string() : to_string(mag) + "*") + sym;
        if (!has_base)
            s = (sgn(slope) < 0 ? "-" : "") + term;
        else
            s += (sgn(slope) < 0 ? " - " : " + ") + term;
    }
    return s;
}

}  // namespace

std::string to_string(const SignedJet& j, const std::string& symbol) {
    return affine_text(j.base().is_finite() ? std::optional<Rational>(j.base().value()) : std::nullopt, j.slope(), symbol);
}

// ---------------------------------------------------------------------------
// LargeJet

LargeJet LargeJet::constant(const TropicalValue& v) {
    return v.is_finite() ? LargeJet(0, v.value()) : LargeJet::neg_inf();
}

std::strong_ordering operator<=>(const LargeJet& a, const LargeJet& b) {
    if (!a.finite_ || !b.finite_) {
        if (!a.finite_ && !b.finite_) return std::strong_ordering::equal;
        return !a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    int c = cmp(a.coeff_, b.coeff_);
    if (c == 0) c = cmp(a.base_, b.base_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

bool operator==(const LargeJet& a, const LargeJet& b) {
    return (a <=> b) == std::strong_ordering::equal;
}

LargeJet large_max(const LargeJet& a, const LargeJet& b) {
    return a < b ? b : a;
}

LargeJet large_plus(const LargeJet& a, const LargeJet& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return LargeJet::neg_inf();
    return LargeJet(a.coeff() + b.coeff(), a.base() + b.base());
}

LargeJet large_minus(const LargeJet& a, const LargeJet& b) {
    if (b.is_neg_inf()) throw Error(ErrorCode::DivisionByBottom, "subtracting -inf");
    if (a.is_neg_inf()) return a;
    return LargeJet(a.coeff() - b.coeff(), a.base() - b.base());
}

LargeJet large_scale(long k, const LargeJet& a) {
    if (a.is_neg_inf()) {
        if (k > 0) return a;
        if (k == 0) return LargeJet(0, 0);
        throw Error(ErrorCode::DivisionByBottom, "negative power of -inf");
    }
    return LargeJet(a.coeff() * k, a.base() * k);
}

std::string to_string(const LargeJet& j, const std::string& symbol) {
    return affine_text(j.is_neg_inf() ? std::nullopt : std::optional<Rational>(j.base()), j.coeff(), symbol);
}

// ---------------------------------------------------------------------------
// PiecewiseLinearFn

PiecewiseLinearFn PiecewiseLinearFn::affine(const Rational& slope, const Rational& value_at_zero) {
    PiecewiseLinearFn f;
    f.knots_ = {Knot{0, value_at_zero}};
    f.left_ = slope;
    f.right_ = slope;
    return f;
}

PiecewiseLinearFn PiecewiseLinearFn::bottom() {
    PiecewiseLinearFn f;
    f.bottom_ = true;
    return f;
}

PiecewiseLinearFn PiecewiseLinearFn::lift(const TropicalValue& v) {
    return v.is_finite() ? constant(v.value()) : bottom();
}

PiecewiseLinearFn PiecewiseLinearFn::from_knots(std::vector<Knot> knots, Rational left_slope, Rational right_slope) {
    if (knots.empty()) throw Error(ErrorCode::InvalidArgument, "piecewise-linear function needs a knot");
    std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.x < b.x; });
    std::vector<Knot> uniq;
    for (auto& k : knots) {
        if (!uniq.empty() && uniq.back().x == k.x) {
            if (uniq.back().y != k.y) throw Error(ErrorCode::InvalidArgument, "discontinuous knots");
            continue;
        }
        uniq.push_back(std::move(k));
    }

    auto seg = [&](std::size_t i) { return Rational((uniq[i + 1].y - uniq[i].y) / (uniq[i + 1].x - uniq[i].x)); };
    std::vector<Knot> kept;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        Rational before = i == 0 ? left_slope : seg(i - 1);
        Rational after = i + 1 == uniq.size() ? right_slope : seg(i);
        if (before != after) kept.push_back(uniq[i]);
    }

    PiecewiseLinearFn f;
    f.left_ = std::move(left_slope);
    f.right_ = std::move(right_slope);
    if (kept.empty()) {
        // Affine: re-anchor at x = 0.
        const Knot& k = uniq.front();
        f.knots_ = {Knot{0, k.y - f.left_ * k.x}};
    } else {
        f.knots_ = std::move(kept);
    }
    return f;
}

std::vector<Rational> PiecewiseLinearFn::breakpoints() const {
    std::vector<Rational> xs;
    if (bottom_) return xs;
    if (knots_.size() == 1 && left_ == right_) return xs;
    for (const auto& k : knots_) xs.push_back(k.x);
    return xs;
}

std::vector<Rational> PiecewiseLinearFn::slopes() const {
    if (bottom_) return {};
    std::vector<Rational> s{left_};
    auto bps = breakpoints();
    for (std::size_t i = 0; i + 1 < knots_.size() && !bps.empty(); ++i)
        s.push_back((knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x));
    if (!bps.empty()) s.push_back(right_);
    return s;
}

Rational PiecewiseLinearFn::finite_value(const Rational& x) const {
    const auto& first = knots_.front();
    if (x <= first.x) return first.y + left_ * (x - first.x);
    const auto& last = knots_.back();
    if (x >= last.x) return last.y + right_ * (x - last.x);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](const Rational& v, const Knot& k) { return v < k.x; });
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

TropicalValue PiecewiseLinearFn::value_at(const Rational& x) const {
    if (bottom_) return TropicalValue::neg_inf();
    return TropicalValue(finite_value(x));
}

Rational PiecewiseLinearFn::slope_left_of(const Rational& x) const {
    if (bottom_) return 0;
    if (x <= knots_.front().x) return left_;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (x <= knots_[i].x) return (knots_[i].y - knots_[i - 1].y) / (knots_[i].x - knots_[i - 1].x);
    return right_;
}

Rational PiecewiseLinearFn::slope_right_of(const Rational& x) const {
    if (bottom_) return 0;
    if (x >= knots_.back().x) return right_;
    for (std::size_t i = knots_.size() - 1; i-- > 0;)
        if (x >= knots_[i].x) return (knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x);
    return left_;
}

namespace {

std::vector<Rational> merged_xs(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    std::vector<Rational> xs;
    for (const auto& k : f.knots()) xs.push_back(k.x);
    for (const auto& k : g.knots()) xs.push_back(k.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

template <class Op>
PiecewiseLinearFn pointwise(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Op op) {
    std::vector<PiecewiseLinearFn::Knot> knots;
    for (const auto& x : merged_xs(f, g)) knots.push_back({x, op(f.value_at(x).value(), g.value_at(x).value())});
    return PiecewiseLinearFn::from_knots(std::move(knots), op(f.left_slope(), g.left_slope()),
                                         op(f.right_slope(), g.right_slope()));
}

}  // namespace

PiecewiseLinearFn pl_plus(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    if (f.is_bottom() || g.is_bottom()) return PiecewiseLinearFn::bottom();
    return pointwise(f, g, [](const Rational& a, const Rational& b) { return Rational(a + b); });
}

PiecewiseLinearFn pl_minus(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    if (g.is_bottom()) throw Error(ErrorCode::DivisionByBottom, "subtracting a function that is identically -inf");
    if (f.is_bottom()) return f;
    return pointwise(f, g, [](const Rational& a, const Rational& b) { return Rational(a - b); });
}

PiecewiseLinearFn pl_scale(long k, const PiecewiseLinearFn& f) {
    if (f.is_bottom()) {
        if (k > 0) return f;
        if (k == 0) return PiecewiseLinearFn::constant(0);
        throw Error(ErrorCode::DivisionByBottom, "negative power of -inf");
    }
    std::vector<PiecewiseLinearFn::Knot> knots = f.knots();
    for (auto& kn : knots) kn.y *= k;
    return PiecewiseLinearFn::from_knots(std::move(knots), f.left_slope() * k, f.right_slope() * k);
}

PiecewiseLinearFn pl_max(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
    if (f.is_bottom()) return g;
    if (g.is_bottom()) return f;

    std::vector<Rational> xs = merged_xs(f, g);
    auto diff = [&](const Rational& x) { return Rational(f.value_at(x).value() - g.value_at(x).value()); };

    // Crossings strictly inside each interval, including the two rays.
    std::vector<Rational> crossings;
    auto ray_root = [&](const Rational& x0, const Rational& slope_diff, bool leftward) {
        if (sgn(slope_diff) == 0) return;
        Rational r = x0 - diff(x0) / slope_diff;
        if (leftward ? r < x0 : r > x0) crossings.push_back(r);
    };
    ray_root(xs.front(), Rational(f.left_slope() - g.left_slope()), true);
    ray_root(xs.back(), Rational(f.right_slope() - g.right_slope()), false);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Rational d0 = diff(xs[i]), d1 = diff(xs[i + 1]);
        if (sgn(d0) * sgn(d1) < 0) crossings.push_back(xs[i] + (xs[i + 1] - xs[i]) * d0 / (d0 - d1));
    }
    xs.insert(xs.end(), crossings.begin(), crossings.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<PiecewiseLinearFn::Knot> knots;
    for (const auto& x : xs) knots.push_back({x, std::max(f.value_at(x).value(), g.value_at(x).value())});

    Rational probe_left = xs.front() - 1, probe_right = xs.back() + 1;
    Rational left = diff(probe_left) >= 0 ? f.left_slope() : g.left_slope();
    Rational right = diff(probe_right) >= 0 ? f.right_slope() : g.right_slope();
    return PiecewiseLinearFn::from_knots(std::move(knots), std::move(left), std::move(right));
}

std::string to_string(const PiecewiseLinearFn& f) {
    if (f.is_bottom()) return "-inf";
    if (f.is_affine()) return "affine(slope " + to_string(f.left_slope()) + ", f(0) = " + to_string(f.knots()[0].y) + ")";
    std::string s = "slope " + to_string(f.left_slope());
    for (std::size_t i = 0; i < f.knots().size(); ++i) {
        const auto& k = f.knots()[i];
        s += " | (" + to_string(k.x) + ", " + to_string(k.y) + ") | slope ";
        s += i + 1 < f.knots().size()
                 ? to_string(Rational((f.knots()[i + 1].y - k.y) / (f.knots()[i + 1].x - k.x)))
                 : to_string(f.right_slope());
    }
    return s;
}

NdSet nd_points(const PiecewiseLinearFn& f) {
    NdSet s;
    if (f.is_bottom()) return s;
    s.finite = f.breakpoints();
    s.neg_inf = sgn(f.left_slope()) != 0;
    return s;
}

std::string to_string(const NdSet& s) {
    if (s.finite.empty() && !s.neg_inf) return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < s.finite.size(); ++i) out += (i ? ", " : "") + to_string(s.finite[i]);
    if (s.neg_inf) out += std::string(s.finite.empty() ? "" : ", ") + "-inf";
    return out + "}";
}

// ---------------------------------------------------------------------------
// Orbits

namespace {

struct JetOps {
    JetSign sign;
    SignedJet lit(const TropicalValue& v) const { return SignedJet(v, 0, sign); }
    SignedJet max(const SignedJet& a, const SignedJet& b) const { return jet_max(a, b); }
    SignedJet plus(const SignedJet& a, const SignedJet& b) const { return jet_plus(a, b); }
    SignedJet minus(const SignedJet& a, const SignedJet& b) const { return jet_minus(a, b); }
    SignedJet scale(long k, const SignedJet& a) const { return jet_scale(k, a); }
};

struct LargeOps {
    LargeJet lit(const TropicalValue& v) const { return LargeJet::constant(v); }
    LargeJet max(const LargeJet& a, const LargeJet& b) const { return large_max(a, b); }
    LargeJet plus(const LargeJet& a, const LargeJet& b) const { return large_plus(a, b); }
    LargeJet minus(const LargeJet& a, const LargeJet& b) const { return large_minus(a, b); }
    LargeJet scale(long k, const LargeJet& a) const { return large_scale(k, a); }
};

struct PlOps {
    PiecewiseLinearFn lit(const TropicalValue& v) const { return PiecewiseLinearFn::lift(v); }
    PiecewiseLinearFn max(const PiecewiseLinearFn& a, const PiecewiseLinearFn& b) const { return pl_max(a, b); }
    PiecewiseLinearFn plus(const PiecewiseLinearFn& a, const PiecewiseLinearFn& b) const { return pl_plus(a, b); }
    PiecewiseLinearFn minus(const PiecewiseLinearFn& a, const PiecewiseLinearFn& b) const { return pl_minus(a, b); }
    PiecewiseLinearFn scale(long k, const PiecewiseLinearFn& a) const { return pl_scale(k, a); }
};

template <class T, class Ops, class Lift>
std::vector<std::vector<T>> iterate(const TropicalMap& m, std::vector<T> init, const TropEnv& params, std::size_t steps,
                                    const Ops& ops, const Lift& lift_param) {
    std::vector<std::vector<T>> out{std::move(init)};
    for (std::size_t n = 0; n < steps; ++n) {
        const auto& cur = out.back();
        auto lookup = [&](const std::string& name) -> T {
            if (auto i = m.index_of(name)) return cur[*i];
            auto it = params.find(name);
            if (it == params.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' is not bound");
            return lift_param(it->second);
        };
        std::vector<T> next;
        next.reserve(m.updates.size());
        for (const auto& u : m.updates) next.push_back(eval_trop_as<T>(u, lookup, ops));
        out.push_back(std::move(next));
    }
    return out;
}

void check_point(const TropicalMap& m, const std::vector<TropicalValue>& point, std::size_t coordinate) {
    if (point.size() != m.state.size()) throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
    if (coordinate >= m.state.size()) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
}

}  // namespace

std::vector<JetState> jet_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                                std::size_t perturbed, JetSign sign, std::size_t steps) {
    check_point(m, point, perturbed);
    if (point[perturbed].is_neg_inf()) throw Error(ErrorCode::InvalidArgument, "cannot perturb a -inf coordinate");
    JetState init;
    for (std::size_t i = 0; i < point.size(); ++i) init.emplace_back(point[i], i == perturbed ? 1 : 0, sign);
    JetOps ops{sign};
    return iterate<SignedJet>(m, std::move(init), params, steps, ops,
                              [&](const TropicalValue& v) { return SignedJet(v, 0, sign); });
}

std::vector<LargeState> large_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                                    std::size_t coordinate, std::size_t steps) {
    check_point(m, point, coordinate);
    LargeState init;
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i == coordinate)
            init.emplace_back(Rational(-1), point[i].is_finite() ? point[i].value() : Rational(0));
        else
            init.push_back(LargeJet::constant(point[i]));
    }
    return iterate<LargeJet>(m, std::move(init), params, steps, LargeOps{},
                             [](const TropicalValue& v) { return LargeJet::constant(v); });
}

std::vector<PlState> pl_orbit(const TropicalMap& m, const std::vector<TropicalValue>& point, const TropEnv& params,
                              std::size_t free, std::size_t steps) {
    check_point(m, point, free);
    PlState init;
    for (std::size_t i = 0; i < point.size(); ++i)
        init.push_back(i == free ? PiecewiseLinearFn::identity() : PiecewiseLinearFn::lift(point[i]));
    return iterate<PiecewiseLinearFn>(m, std::move(init), params, steps, PlOps{},
                                      [](const TropicalValue& v) { return PiecewiseLinearFn::lift(v); });
}

bool is_shift_map(const TropicalMap& m) {
    if (m.state.size() < 2) return false;
    const auto& u = m.updates[0];
    return u->kind == TropKind::Var && u->name == m.state[1];
}

bool UltraStep::all_differentiable() const {
    return std::all_of(coords.begin(), coords.end(), [](const auto& c) { return c.differentiable; });
}

UltraConfinementReport differentiability_report(const TropicalMap& m, const std::vector<TropicalValue>& point,
                                                const TropEnv& params, std::size_t perturbed, std::size_t steps) {
    auto right = jet_orbit(m, point, params, perturbed, JetSign::Plus, steps);
    auto left = jet_orbit(m, point, params, perturbed, JetSign::Minus, steps);

    UltraConfinementReport report;
    report.coordinates = m.state;
    report.perturbed = m.state[perturbed];
    report.point = point;
    for (std::size_t n = 0; n <= steps; ++n) {
        UltraStep st;
        st.n = n;
        for (std::size_t i = 0; i < m.state.size(); ++i) {
            const SignedJet& l = left[n][i];
            const SignedJet& r = right[n][i];
            st.coords.push_back({l, r, l.base() == r.base() && l.slope() == r.slope()});
        }
        bool ok = st.all_differentiable();
        if (!ok && !report.first_nd) report.first_nd = n;
        if (ok && report.first_nd && !report.confined_at) report.confined_at = n;
        report.steps.push_back(std::move(st));
    }
    if (!report.first_nd)
        report.verdict = "differentiable at every step up to " + std::to_string(steps);
    else if (report.confined_at)
        report.verdict = "confined at " + std::to_string(*report.confined_at);
    else
        report.verdict = "not confined within " + std::to_string(steps);
    return report;
}

}  // namespace udc
