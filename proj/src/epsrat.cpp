#include "udc/epsrat.hpp"

#include <algorithm>

#include "udc/error.hpp"

namespace udc {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::eps() { return Poly({Rational(0), Rational(1)}); }

void Poly::trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

long Poly::low_order() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (sgn(c_[i]) != 0) return static_cast<long>(i);
    throw Error(ErrorCode::ZeroFunction, "zero polynomial has no order");
}

Rational Poly::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    return a + Rational(-1) * b;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (sgn(a.c_[i]) == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
}

Poly operator*(const Rational& k, const Poly& a) {
    std::vector<Rational> c = a.c_;
    for (auto& x : c) x *= k;
    return Poly(std::move(c));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "polynomial division by zero");
    std::vector<Rational> rem = a.coeffs();
    const auto& d = b.coeffs();
    if (rem.size() < d.size()) return {Poly(), a};
    std::vector<Rational> quo(rem.size() - d.size() + 1);
    for (std::size_t k = quo.size(); k-- > 0;) {
        Rational q = rem[k + d.size() - 1] / d.back();
        quo[k] = q;
        if (sgn(q) == 0) continue;
        for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= q * d[j];
    }
    rem.resize(d.size() - 1);
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return Rational(1 / a.lead()) * a;
}

std::string to_string(const Poly& p, const std::string& symbol) {
    if (p.is_zero()) return "0";
    std::string s;
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (sgn(c[i]) == 0) continue;
        Rational mag = abs(c[i]);
        bool neg = sgn(c[i]) < 0;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (i == 0) {
            s += to_string(mag);
        } else {
            if (mag != 1) s += to_string(mag) + "*";
            s += symbol;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

EpsRat::EpsRat(Poly num, Poly den) {
    if (den.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "zero denominator");
    if (num.is_zero()) {
        den_ = Poly::constant(1);
        return;
    }
    Poly g = gcd(num, den);
    num = divmod(num, g).first;
    den = divmod(den, g).first;
    Rational scale = 1 / den.lead();
    num_ = scale * num;
    den_ = scale * den;
}

EpsRat operator+(const EpsRat& a, const EpsRat& b) {
    if (a.den_ == b.den_) return EpsRat(a.num_ + b.num_, a.den_);
    return EpsRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

EpsRat operator-(const EpsRat& a, const EpsRat& b) {
    return a + (-b);
}

EpsRat operator*(const EpsRat& a, const EpsRat& b) {
    return EpsRat(a.num_ * b.num_, a.den_ * b.den_);
}

EpsRat operator/(const EpsRat& a, const EpsRat& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "division by the zero function");
    return EpsRat(a.num_ * b.den_, a.den_ * b.num_);
}

EpsRat EpsRat::operator-() const {
    EpsRat r = *this;
    r.num_ = Rational(-1) * r.num_;
    return r;
}

Rational EpsRat::at(const Rational& e) const {
    Rational d = den_(e);
    if (sgn(d) == 0) throw Error(ErrorCode::DivisionByZeroFunction, "pole at eps = " + to_string(e));
    return num_(e) / d;
}

long ord0(const EpsRat& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroFunction, "order of the zero function");
    return f.num().low_order() - f.den().low_order();
}

std::optional<Rational> limit0(const EpsRat& f) {
    if (f.is_zero()) return Rational(0);
    long ord = ord0(f);
    if (ord > 0) return Rational(0);
    if (ord < 0) return std::nullopt;
    const auto& n = f.num().coeffs();
    const auto& d = f.den().coeffs();
    return Rational(n[static_cast<std::size_t>(f.num().low_order())] / d[static_cast<std::size_t>(f.den().low_order())]);
}

std::string to_string(const EpsRat& f, const std::string& symbol) {
    if (f.den() == Poly::constant(1)) return to_string(f.num(), symbol);
    return "(" + to_string(f.num(), symbol) + ")/(" + to_string(f.den(), symbol) + ")";
}

}  // namespace udc
