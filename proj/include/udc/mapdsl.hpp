#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "udc/error.hpp"
#include "udc/maxplus.hpp"
#include "udc/rational.hpp"

namespace udc {

// ---------------------------------------------------------------------------
// Rational expressions over state variables and named parameters.

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprKind { Lit, Var, Param, Add, Sub, Mul, Div, Neg, Pow };

class ExprNode {
public:
    ExprKind kind;
    Rational literal;             // Lit
    std::string name;             // Var, Param
    std::vector<Expr> operands;   // binary: 2, Neg/Pow: 1
    long exponent = 0;            // Pow
};

namespace ex {
Expr lit(Rational v);
Expr var(std::string name);
Expr param(std::string name);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr pow(Expr base, long exponent);
}  // namespace ex

bool structurally_equal(const Expr& a, const Expr& b);
std::size_t node_count(const Expr& e);

/// Prints in the map-file expression syntax; parse(print(e)) reproduces e
/// for every tree the parser can produce.
std::string to_string(const Expr& e);

/// True iff the tree contains no Sub, no Neg and no literal <= 0.
bool is_subtraction_free(const Expr& e);

/// Evaluates a rational expression over a field-like carrier. `Ops` supplies
/// lit, add, sub, mul, div, neg, pow(value, long).
template <class T, class Lookup, class Ops>
T evaluate(const Expr& e, const Lookup& lookup, const Ops& ops) {
    switch (e->kind) {
        case ExprKind::Lit: return ops.lit(e->literal);
        case ExprKind::Var:
        case ExprKind::Param: return lookup(e->name);
        case ExprKind::Add:
            return ops.add(evaluate<T>(e->operands[0], lookup, ops), evaluate<T>(e->operands[1], lookup, ops));
        case ExprKind::Sub:
            return ops.sub(evaluate<T>(e->operands[0], lookup, ops), evaluate<T>(e->operands[1], lookup, ops));
        case ExprKind::Mul:
            return ops.mul(evaluate<T>(e->operands[0], lookup, ops), evaluate<T>(e->operands[1], lookup, ops));
        case ExprKind::Div:
            return ops.div(evaluate<T>(e->operands[0], lookup, ops), evaluate<T>(e->operands[1], lookup, ops));
        case ExprKind::Neg: return ops.neg(evaluate<T>(e->operands[0], lookup, ops));
        case ExprKind::Pow: return ops.pow(evaluate<T>(e->operands[0], lookup, ops), e->exponent);
    }
    return ops.lit(Rational(0));
}

/// Binary exponentiation with a field's mul/div; exponent 0 gives `one`.
template <class T, class Ops>
T integer_power(const T& base, long k, const T& one, const Ops& ops) {
    if (k == 0) return one;
    unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    T result = one;
    T b = base;
    bool first = true;
    while (n) {
        if (n & 1UL) {
            result = first ? b : ops.mul(result, b);
            first = false;
        }
        n >>= 1;
        if (n) b = ops.mul(b, b);
    }
    return k < 0 ? ops.div(one, result) : result;
}

// ---------------------------------------------------------------------------
// Maps.

struct ParamDecl {
    std::string name;
    std::string alias;  // tropical name, e.g. a -> A
};

/// A first-order system x_i' = f_i(x, p) of rational update expressions.
struct RationalMap {
    std::vector<std::string> state;
    std::vector<ParamDecl> params;
    std::vector<Expr> updates;  // one per state variable, same order

    std::optional<std::size_t> index_of(std::string_view name) const;
    bool is_param(std::string_view name) const;
};

/// A first-order system of tropically rational update expressions. Parameters
/// appear in update expressions as plain variables.
struct TropicalMap {
    std::vector<std::string> state;
    std::vector<std::string> params;
    std::vector<TropExpr> updates;

    std::optional<std::size_t> index_of(std::string_view name) const;
};

/// Parses a map file. Rational maps use `vars:`/`params: a -> A` headers and
/// `name' = expr` updates; a `kind: tropical` header switches the update
/// grammar to tropical expressions (params are then listed without aliases).
RationalMap parse_map(std::string_view text);
TropicalMap parse_tropical_map(std::string_view text);

/// True when the text declares `kind: tropical`.
bool is_tropical_map_text(std::string_view text);

/// Parses a single expression against declared state/param names.
Expr parse_expr(std::string_view text, const std::vector<std::string>& vars,
                const std::vector<std::string>& params = {});

std::string to_string(const RationalMap& m);
std::string to_string(const TropicalMap& m);

bool structurally_equal(const RationalMap& a, const RationalMap& b);

/// Tropical name of a state variable: the first letter upper-cased.
std::string tropical_name(std::string_view state_name);

/// Operator replacement + -> max, * -> +, / -> -, x^k -> k*X, x -> X,
/// p -> alias(p), positive literal -> 0. Throws NotSubtractionFree.
TropExpr ultradiscretize(const Expr& e, const RationalMap& context);
TropExpr ultradiscretize(const Expr& e);  // variables keep their own names
TropicalMap ultradiscretize(const RationalMap& m);

/// Advances a tropical map one step. `env` must bind every state and param
/// name; the result lists the new state in map order.
std::vector<TropicalValue> step(const TropicalMap& m, const std::vector<TropicalValue>& state,
                                const TropEnv& params);

std::vector<std::vector<TropicalValue>> orbit(const TropicalMap& m, std::vector<TropicalValue> init,
                                              const TropEnv& params, std::size_t steps);

// ---------------------------------------------------------------------------
// Numeric check of the limit definition F(X) = lim eps*log f(e^{X/eps}).

struct LimitDeviation {
    double epsilon = 0;
    std::optional<double> deviation;  // empty when the evaluation overflowed
    std::string error;
};

/// Evaluates eps*log f(e^{X/eps}) in floating point (log domain) for each
/// eps and returns |eps*log f - F(X)| where F is the ultradiscretization.
std::vector<LimitDeviation> numeric_ud_check(const Expr& e, const TropEnv& assignment,
                                             const std::vector<Rational>& eps_list);

}  // namespace udc
