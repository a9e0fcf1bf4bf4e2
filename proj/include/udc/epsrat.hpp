#pragma once

#include <optional>
#include <string>
#include <vector>

#include "udc/rational.hpp"

namespace udc {

/// Dense univariate polynomial over Q in the perturbation parameter eps,
/// coefficients in ascending degree, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    static Poly eps();

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    const Rational& lead() const { return c_.back(); }
    /// Index of the lowest nonzero coefficient. Precondition: !is_zero().
    long low_order() const;
    Rational operator()(const Rational& x) const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& k, const Poly& a);
    friend bool operator==(const Poly&, const Poly&) = default;

private:
    std::vector<Rational> c_;
    void trim();
};

/// Quotient and remainder; divisor must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic gcd (zero when both are zero).
Poly gcd(Poly a, Poly b);

std::string to_string(const Poly& p, const std::string& symbol = "e");

/// Exact rational function of eps in lowest terms with monic denominator.
class EpsRat {
public:
    EpsRat() : num_(), den_(Poly::constant(1)) {}
    EpsRat(const Rational& c) : num_(Poly::constant(c)), den_(Poly::constant(1)) {}
    EpsRat(Poly num, Poly den);

    static EpsRat eps() { return EpsRat(Poly::eps(), Poly::constant(1)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend EpsRat operator+(const EpsRat& a, const EpsRat& b);
    friend EpsRat operator-(const EpsRat& a, const EpsRat& b);
    friend EpsRat operator*(const EpsRat& a, const EpsRat& b);
    /// Throws DivisionByZeroFunction when b is the zero function.
    friend EpsRat operator/(const EpsRat& a, const EpsRat& b);
    EpsRat operator-() const;
    friend bool operator==(const EpsRat&, const EpsRat&) = default;

    /// Value at a concrete eps. Throws DivisionByZeroFunction at a pole.
    Rational at(const Rational& e) const;

private:
    Poly num_;
    Poly den_;
};

/// Order of vanishing at eps = 0 (negative for a pole). Throws ZeroFunction.
long ord0(const EpsRat& f);

/// Projective limit at eps -> 0: nullopt stands for infinity.
std::optional<Rational> limit0(const EpsRat& f);

std::string to_string(const EpsRat& f, const std::string& symbol = "e");

}  // namespace udc
