#include "udc/puiseux.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "udc/error.hpp"

namespace udc {

namespace {

using Bound = std::optional<Rational>;  // nullopt = -inf

Bound max_bound(const Bound& a, const Bound& b) {
    if (!a) return b;
    if (!b) return a;
    return *a < *b ? b : a;
}

Bound add_bound(const Bound& a, const Bound& b) {
    if (!a || !b) return std::nullopt;
    return Rational(*a + *b);
}

bool by_descending_exponent(const SeriesTerm& a, const SeriesTerm& b) {
    return a.exponent > b.exponent;
}

// Sorts, merges equal exponents, drops zero coefficients and terms below tau.
std::vector<SeriesTerm> normalize(std::vector<SeriesTerm> terms, const Bound& threshold) {
    std::sort(terms.begin(), terms.end(), by_descending_exponent);
    std::vector<SeriesTerm> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (threshold && t.exponent < *threshold) break;
        if (!out.empty() && out.back().exponent == t.exponent) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const SeriesTerm& t) { return sgn(t.coeff) == 0; });
    return out;
}

Bound leading_exponent(const PuiseuxSeries& f) {
    if (f.terms().empty()) return std::nullopt;
    return f.terms().front().exponent;
}

}  // namespace

PuiseuxSeries PuiseuxSeries::constant(const Rational& c) {
    return monomial(c, Rational(0));
}

PuiseuxSeries PuiseuxSeries::monomial(const Rational& coeff, const Rational& exponent) {
    return from_terms({SeriesTerm{exponent, coeff}});
}

PuiseuxSeries PuiseuxSeries::from_terms(std::vector<SeriesTerm> terms, std::optional<Rational> threshold) {
    PuiseuxSeries f;
    f.terms_ = normalize(std::move(terms), threshold);
    f.threshold_ = std::move(threshold);
    return f;
}

PuiseuxSeries ps_add(const PuiseuxSeries& f, const PuiseuxSeries& g) {
    std::vector<SeriesTerm> merged;
    merged.reserve(f.terms().size() + g.terms().size());
    const auto& a = f.terms();
    const auto& b = g.terms();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].exponent > b[j].exponent)) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || b[j].exponent > a[i].exponent) {
            merged.push_back(b[j++]);
        } else {
            Rational c = a[i].coeff + b[j].coeff;
            if (sgn(c) != 0) merged.push_back(SeriesTerm{a[i].exponent, c});
            ++i, ++j;
        }
    }
    Bound tau = max_bound(f.threshold(), g.threshold());
    if (tau) std::erase_if(merged, [&](const SeriesTerm& t) { return t.exponent < *tau; });
    return PuiseuxSeries::from_terms(std::move(merged), tau);
}

PuiseuxSeries ps_neg(const PuiseuxSeries& f) {
    std::vector<SeriesTerm> terms = f.terms();
    for (auto& t : terms) t.coeff = -t.coeff;
    return PuiseuxSeries::from_terms(std::move(terms), f.threshold());
}

PuiseuxSeries ps_sub(const PuiseuxSeries& f, const PuiseuxSeries& g) {
    return ps_add(f, ps_neg(g));
}

PuiseuxSeries ps_mul(const PuiseuxSeries& f, const PuiseuxSeries& g) {
    if (f.is_exact_zero() || g.is_exact_zero()) return PuiseuxSeries::zero();

    // f = F + O(tau_f), g = G + O(tau_g): the unknown part of fg lies below
    // max(tau_f + v(G), tau_g + v(F), tau_f + tau_g).
    Bound tau = max_bound(max_bound(add_bound(f.threshold(), leading_exponent(g)),
                                    add_bound(g.threshold(), leading_exponent(f))),
                          add_bound(f.threshold(), g.threshold()));

    std::vector<SeriesTerm> products;
    products.reserve(f.terms().size() * std::min<std::size_t>(g.terms().size(), 64));
    for (const auto& a : f.terms()) {
        for (const auto& b : g.terms()) {
            Rational e = a.exponent + b.exponent;
            if (tau && e < *tau) break;  // g is descending
            products.push_back(SeriesTerm{std::move(e), a.coeff * b.coeff});
        }
    }
    return PuiseuxSeries::from_terms(std::move(products), tau);
}

PuiseuxSeries ps_truncate(const PuiseuxSeries& f, const Rational& depth) {
    if (f.terms().empty()) return f;
    Rational cutoff = f.terms().front().exponent - depth;
    if (f.terms().back().exponent >= cutoff) return f;
    std::vector<SeriesTerm> kept;
    for (const auto& t : f.terms()) {
        if (t.exponent < cutoff) break;
        kept.push_back(t);
    }
    return PuiseuxSeries::from_terms(std::move(kept), max_bound(f.threshold(), cutoff));
}

namespace {

// Sum_{k>=0} (-u)^k for u with negative exponents, keeping exponents >= -limit.
// Dense recurrence on the exponent lattice when it is small enough, repeated
// truncated multiplication otherwise.
std::vector<SeriesTerm> geometric_inverse(const std::vector<SeriesTerm>& u, const Rational& limit) {
    mpz_class lattice = 1;
    for (const auto& t : u) lattice = lcm(lattice, mpz_class(t.exponent.get_den()));
    mpz_class span = mpz_class(limit.get_num() * lattice) / limit.get_den();  // floor(limit * lattice)

    constexpr long dense_limit = 1L << 20;
    if (span <= dense_limit) {
        const long n_max = span.get_si();
        // u_j sits at relative exponent -j/lattice.
        std::vector<std::pair<long, Rational>> coeffs;
        for (const auto& t : u) {
            mpz_class j = mpz_class(-t.exponent.get_num() * lattice) / t.exponent.get_den();
            if (j <= n_max) coeffs.emplace_back(j.get_si(), t.coeff);
        }
        std::vector<Rational> s(static_cast<std::size_t>(n_max) + 1);
        s[0] = 1;
        for (long n = 1; n <= n_max; ++n) {
            Rational acc = 0;
            for (const auto& [j, c] : coeffs) {
                if (j > n) break;  // ascending j since u is descending in exponent
                const Rational& prev = s[static_cast<std::size_t>(n - j)];
                if (sgn(prev) != 0) acc -= c * prev;
            }
            s[static_cast<std::size_t>(n)] = acc;
        }
        std::vector<SeriesTerm> out;
        for (long n = 0; n <= n_max; ++n) {
            if (sgn(s[static_cast<std::size_t>(n)]) == 0) continue;
            out.push_back(SeriesTerm{Rational(mpq_class(-n, 1) / mpq_class(lattice)), s[static_cast<std::size_t>(n)]});
        }
        for (auto& t : out) t.exponent.canonicalize();
        return out;
    }

    PuiseuxSeries minus_u = ps_neg(PuiseuxSeries::from_terms(u));
    PuiseuxSeries sum = PuiseuxSeries::constant(1);
    PuiseuxSeries power = sum;
    Rational cutoff = -limit;
    for (;;) {
        PuiseuxSeries next = ps_mul(power, minus_u);
        std::vector<SeriesTerm> kept;
        for (const auto& t : next.terms())
            if (t.exponent >= cutoff) kept.push_back(t);
        if (kept.empty()) break;
        power = PuiseuxSeries::from_terms(std::move(kept));
        sum = ps_add(sum, power);
    }
    return sum.terms();
}

}  // namespace

PuiseuxSeries ps_inv(const PuiseuxSeries& f, const Rational& depth) {
    if (f.is_exact_zero()) throw Error(ErrorCode::DivisionByZeroSeries, "inverse of the zero series");
    if (f.is_indeterminate())
        throw Error(ErrorCode::IndeterminateLeadingTerm, "leading term of " + to_string(f) + " is unknown");
    if (sgn(depth) <= 0) throw Error(ErrorCode::InvalidArgument, "window depth must be positive");

    const Rational nu = f.terms().front().exponent;
    const Rational c = f.terms().front().coeff;
    const Rational c_inv = 1 / c;

    // f = c z^nu (1 + u)
    std::vector<SeriesTerm> u;
    for (std::size_t i = 1; i < f.terms().size(); ++i)
        u.push_back(SeriesTerm{f.terms()[i].exponent - nu, f.terms()[i].coeff / c});

    if (u.empty() && f.is_exact()) return PuiseuxSeries::monomial(c_inv, -nu);

    Rational limit = depth;
    if (f.threshold()) limit = std::min(limit, Rational(nu - *f.threshold()));

    std::vector<SeriesTerm> s = u.empty() ? std::vector<SeriesTerm>{SeriesTerm{0, 1}} : geometric_inverse(u, limit);
    for (auto& t : s) {
        t.exponent -= nu;
        t.coeff *= c_inv;
    }
    return PuiseuxSeries::from_terms(std::move(s), Rational(-nu - limit));
}

PuiseuxSeries ps_div(const PuiseuxSeries& f, const PuiseuxSeries& g, const Rational& depth) {
    return ps_mul(f, ps_inv(g, depth));
}

PuiseuxSeries ps_pow(const PuiseuxSeries& f, long k, const Rational& depth) {
    if (k == 0) return PuiseuxSeries::constant(1);
    PuiseuxSeries base = k < 0 ? ps_inv(f, depth) : f;
    unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    PuiseuxSeries result = PuiseuxSeries::constant(1);
    while (n) {
        if (n & 1UL) result = ps_truncate(ps_mul(result, base), depth);
        n >>= 1;
        if (n) base = ps_truncate(ps_mul(base, base), depth);
    }
    return result;
}

TropicalValue valuation(const PuiseuxSeries& f) {
    if (f.is_exact_zero()) return TropicalValue::neg_inf();
    if (f.terms().empty())
        throw Error(ErrorCode::IndeterminateValuation, "all known terms cancelled above " + to_string(*f.threshold()));
    return TropicalValue(f.terms().front().exponent);
}

Rational leading_coeff(const PuiseuxSeries& f) {
    if (f.is_exact_zero()) throw Error(ErrorCode::InvalidArgument, "the zero series has no leading coefficient");
    if (f.terms().empty())
        throw Error(ErrorCode::IndeterminateValuation, "all known terms cancelled above " + to_string(*f.threshold()));
    return f.terms().front().coeff;
}

std::string to_string(const PuiseuxSeries& f) {
    if (f.is_exact_zero()) return "0";
    std::string s;
    for (const auto& t : f.terms()) {
        if (!s.empty()) s += " + ";
        s += to_string(t.coeff) + "*z^(" + to_string(t.exponent) + ")";
    }
    if (f.threshold()) {
        if (!s.empty()) s += " + ";
        s += "O(z^(" + to_string(*f.threshold()) + "))";
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

class SeriesParser {
public:
    explicit SeriesParser(std::string_view s) : s_(s) {}

    PuiseuxSeries parse() {
        std::vector<SeriesTerm> terms;
        std::optional<Rational> tau;
        bool first = true;
        for (;;) {
            skip();
            if (pos_ == s_.size()) {
                if (first) fail("empty series");
                break;
            }
            bool negative = false;
            if (!first) {
                if (accept('+')) {
                } else if (accept('-')) {
                    negative = true;
                } else {
                    fail("expected '+' or '-'");
                }
            }
            while (accept('-')) negative = !negative;
            first = false;
            skip();
            if (accept('O')) {
                if (!accept('(')) fail("expected '(' after O");
                if (!accept('z')) fail("expected z in O(...)");
                Rational e = 1;
                if (accept('^')) e = exponent();
                if (!accept(')')) fail("expected ')'");
                tau = tau ? std::max(*tau, e) : e;
                continue;
            }
            Rational coeff = 1;
            bool have_coeff = false;
            if (at_digit()) {
                coeff = number();
                have_coeff = true;
            }
            Rational e = 0;
            bool have_z = false;
            if (have_coeff && accept('*')) {
                if (!accept('z')) fail("expected z after '*'");
                have_z = true;
            } else if (accept('z')) {
                have_z = true;
            }
            if (!have_coeff && !have_z) fail("expected a term");
            if (have_z) {
                e = 1;
                if (accept('^')) e = exponent();
            }
            terms.push_back(SeriesTerm{e, negative ? Rational(-coeff) : coeff});
        }
        return PuiseuxSeries::from_terms(std::move(terms), tau);
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::SyntaxError,
                    msg + " in series '" + std::string(s_) + "' at column " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool at_digit() {
        skip();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }
    Rational number() {
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::size_t save = pos_;
        if (accept('/') && at_digit()) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
            pos_ = save;
        }
        std::string text(s_.substr(b, pos_ - b));
        std::erase_if(text, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        try {
            return parse_rational(text);
        } catch (const Error&) {
            fail("malformed number '" + text + "'");
        }
    }
    Rational exponent() {
        bool parens = accept('(');
        bool negative = accept('-');
        if (!at_digit()) fail("expected exponent");
        Rational e = number();
        if (parens && !accept(')')) fail("expected ')'");
        return negative ? Rational(-e) : e;
    }
};

}  // namespace

PuiseuxSeries parse_puiseux(std::string_view text) {
    std::string trimmed(text);
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed == "0") return PuiseuxSeries::zero();
    return SeriesParser(text).parse();
}

}  // namespace udc
