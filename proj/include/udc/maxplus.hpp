#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udc/rational.hpp"

namespace udc {

/// Element of the max-plus semiring: an exact rational or the bottom element
/// -inf. Bottom compares below every finite value.
class TropicalValue {
public:
    TropicalValue() = default;  // -inf
    TropicalValue(Rational v) : value_(std::move(v)) {}
    TropicalValue(long v) : value_(Rational(v)) {}

    static TropicalValue neg_inf() { return TropicalValue(); }

    bool is_finite() const { return value_.has_value(); }
    bool is_neg_inf() const { return !value_.has_value(); }

    // Precondition: is_finite().
    const Rational& value() const { return *value_; }

    friend bool operator==(const TropicalValue& a, const TropicalValue& b) {
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const TropicalValue& a, const TropicalValue& b);

private:
    std::optional<Rational> value_;
};

std::string to_string(const TropicalValue& v);

// Accepts a rational or `-inf`.
TropicalValue parse_tropical(std::string_view text);

/// x1 + x2 -> max(X1, X2)
TropicalValue trop_add(const TropicalValue& a, const TropicalValue& b);
/// x1 * x2 -> X1 + X2
TropicalValue trop_mul(const TropicalValue& a, const TropicalValue& b);
/// x1 / x2 -> X1 - X2. Throws DivisionByBottom when b is -inf.
TropicalValue trop_div(const TropicalValue& a, const TropicalValue& b);
/// Integer power x^k -> k*X. 0*(-inf) is 0 (empty product); negative k on -inf
/// throws DivisionByBottom.
TropicalValue trop_scale(long k, const TropicalValue& a);

// ---------------------------------------------------------------------------
// Tropically rational expressions.

class TropNode;
using TropExpr = std::shared_ptr<const TropNode>;

enum class TropKind { Lit, Var, Max, Plus, Minus, IntScale };

class TropNode {
public:
    TropKind kind;
    TropicalValue literal;          // Lit
    std::string name;               // Var
    std::vector<TropExpr> operands; // Max/Plus (>= 2), Minus (2), IntScale (1)
    long scale = 0;                 // IntScale
};

namespace trop {
TropExpr lit(TropicalValue v);
TropExpr var(std::string name);
// max/plus flatten nested nodes of the same kind.
TropExpr max(std::vector<TropExpr> operands);
TropExpr plus(std::vector<TropExpr> operands);
TropExpr minus(TropExpr left, TropExpr right);
TropExpr scale(long k, TropExpr operand);
}  // namespace trop

bool structurally_equal(const TropExpr& a, const TropExpr& b);

std::string to_string(const TropExpr& e);

using TropEnv = std::map<std::string, TropicalValue, std::less<>>;

TropicalValue eval_trop(const TropExpr& e, const TropEnv& env);

/// Evaluates a tropical expression over any carrier that supplies the
/// semiring operations. `Ops` must provide lit, max, plus, minus, scale.
template <class T, class Lookup, class Ops>
T eval_trop_as(const TropExpr& e, const Lookup& lookup, const Ops& ops) {
    switch (e->kind) {
        case TropKind::Lit: return ops.lit(e->literal);
        case TropKind::Var: return lookup(e->name);
        case TropKind::Max: {
            T acc = eval_trop_as<T>(e->operands[0], lookup, ops);
            for (std::size_t i = 1; i < e->operands.size(); ++i)
                acc = ops.max(acc, eval_trop_as<T>(e->operands[i], lookup, ops));
            return acc;
        }
        case TropKind::Plus: {
            T acc = eval_trop_as<T>(e->operands[0], lookup, ops);
            for (std::size_t i = 1; i < e->operands.size(); ++i)
                acc = ops.plus(acc, eval_trop_as<T>(e->operands[i], lookup, ops));
            return acc;
        }
        case TropKind::Minus:
            return ops.minus(eval_trop_as<T>(e->operands[0], lookup, ops),
                             eval_trop_as<T>(e->operands[1], lookup, ops));
        case TropKind::IntScale:
            return ops.scale(e->scale, eval_trop_as<T>(e->operands[0], lookup, ops));
    }
    return ops.lit(TropicalValue::neg_inf());
}

void collect_names(const TropExpr& e, std::vector<std::string>& out);

/// Parses the tropical expression syntax produced by to_string:
///   expr := term (('+'|'-') term)*
///   term := [integer '*'] unary
///   unary := '-' unary | atom
///   atom := rational | '-inf' | name | 'max' '(' expr (',' expr)+ ')' | '(' expr ')'
/// A leading '-' denotes the tropical inverse (IntScale -1).
TropExpr parse_trop_expr(std::string_view text);

}  // namespace udc
