#include "udc/maxplus.hpp"

#include <cctype>

#include "udc/error.hpp"

namespace udc {

std::strong_ordering operator<=>(const TropicalValue& a, const TropicalValue& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) {
        if (a.is_neg_inf() && b.is_neg_inf()) return std::strong_ordering::equal;
        return a.is_neg_inf() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    int c = cmp(a.value(), b.value());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string to_string(const TropicalValue& v) {
    return v.is_finite() ? to_string(v.value()) : std::string("-inf");
}

TropicalValue parse_tropical(std::string_view text) {
    std::string s(text);
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b != std::string::npos) s = s.substr(b, e - b + 1);
    if (s == "-inf") return TropicalValue::neg_inf();
    return TropicalValue(parse_rational(s));
}

TropicalValue trop_add(const TropicalValue& a, const TropicalValue& b) {
    return a < b ? b : a;
}

TropicalValue trop_mul(const TropicalValue& a, const TropicalValue& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return TropicalValue::neg_inf();
    return TropicalValue(Rational(a.value() + b.value()));
}

TropicalValue trop_div(const TropicalValue& a, const TropicalValue& b) {
    if (b.is_neg_inf())
        throw Error(ErrorCode::DivisionByBottom, "tropical division by -inf");
    if (a.is_neg_inf()) return TropicalValue::neg_inf();
    return TropicalValue(Rational(a.value() - b.value()));
}

TropicalValue trop_scale(long k, const TropicalValue& a) {
    if (a.is_neg_inf()) {
        if (k > 0) return TropicalValue::neg_inf();
        if (k == 0) return TropicalValue(0);
        throw Error(ErrorCode::DivisionByBottom, "negative power of -inf");
    }
    return TropicalValue(Rational(a.value() * k));
}

// ---------------------------------------------------------------------------

namespace trop {

TropExpr lit(TropicalValue v) {
    auto n = std::make_shared<TropNode>();
    n->kind = TropKind::Lit;
    n->literal = std::move(v);
    return n;
}

TropExpr var(std::string name) {
    auto n = std::make_shared<TropNode>();
    n->kind = TropKind::Var;
    n->name = std::move(name);
    return n;
}

static TropExpr flattened(TropKind kind, std::vector<TropExpr> operands) {
    if (operands.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "max/plus need at least two operands");
    auto n = std::make_shared<TropNode>();
    n->kind = kind;
    for (auto& op : operands) {
        if (op->kind == kind)
            n->operands.insert(n->operands.end(), op->operands.begin(), op->operands.end());
        else
            n->operands.push_back(std::move(op));
    }
    return n;
}

TropExpr max(std::vector<TropExpr> operands) { return flattened(TropKind::Max, std::move(operands)); }
TropExpr plus(std::vector<TropExpr> operands) { return flattened(TropKind::Plus, std::move(operands)); }

TropExpr minus(TropExpr left, TropExpr right) {
    auto n = std::make_shared<TropNode>();
    n->kind = TropKind::Minus;
    n->operands = {std::move(left), std::move(right)};
    return n;
}

TropExpr scale(long k, TropExpr operand) {
    auto n = std::make_shared<TropNode>();
    n->kind = TropKind::IntScale;
    n->scale = k;
    n->operands = {std::move(operand)};
    return n;
}

}  // namespace trop

bool structurally_equal(const TropExpr& a, const TropExpr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TropKind::Lit: return a->literal == b->literal;
        case TropKind::Var: return a->name == b->name;
        case TropKind::IntScale:
            if (a->scale != b->scale) return false;
            break;
        default: break;
    }
    if (a->operands.size() != b->operands.size()) return false;
    for (std::size_t i = 0; i < a->operands.size(); ++i)
        if (!structurally_equal(a->operands[i], b->operands[i])) return false;
    return true;
}

namespace {

bool is_additive(const TropExpr& e) {
    return e->kind == TropKind::Plus || e->kind == TropKind::Minus;
}

std::string wrap(const TropExpr& e, bool parens) {
    return parens ? "(" + to_string(e) + ")" : to_string(e);
}

}  // namespace

std::string to_string(const TropExpr& e) {
    switch (e->kind) {
        case TropKind::Lit: return to_string(e->literal);
        case TropKind::Var: return e->name;
        case TropKind::Max: {
            std::string s = "max(";
            for (std::size_t i = 0; i < e->operands.size(); ++i) {
                if (i) s += ", ";
                s += to_string(e->operands[i]);
            }
            return s + ")";
        }
        case TropKind::Plus: {
            std::string s;
            for (std::size_t i = 0; i < e->operands.size(); ++i) {
                if (i) s += " + ";
                s += wrap(e->operands[i], i > 0 && is_additive(e->operands[i]));
            }
            return s;
        }
        case TropKind::Minus:
            return to_string(e->operands[0]) + " - " + wrap(e->operands[1], is_additive(e->operands[1]));
        case TropKind::IntScale: {
            const auto& op = e->operands[0];
            return std::to_string(e->scale) + "*" +
                   wrap(op, is_additive(op) || op->kind == TropKind::IntScale ||
                                (op->kind == TropKind::Lit && op->literal.is_neg_inf()));
        }
    }
    return {};
}

TropicalValue eval_trop(const TropExpr& e, const TropEnv& env) {
    struct Ops {
        TropicalValue lit(const TropicalValue& v) const { return v; }
        TropicalValue max(const TropicalValue& a, const TropicalValue& b) const { return trop_add(a, b); }
        TropicalValue plus(const TropicalValue& a, const TropicalValue& b) const { return trop_mul(a, b); }
        TropicalValue minus(const TropicalValue& a, const TropicalValue& b) const { return trop_div(a, b); }
        TropicalValue scale(long k, const TropicalValue& a) const { return trop_scale(k, a); }
    };
    auto lookup = [&](const std::string& name) -> TropicalValue {
        auto it = env.find(name);
        if (it == env.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' is not bound");
        return it->second;
    };
    return eval_trop_as<TropicalValue>(e, lookup, Ops{});
}

void collect_names(const TropExpr& e, std::vector<std::string>& out) {
    if (e->kind == TropKind::Var) {
        out.push_back(e->name);
        return;
    }
    for (const auto& op : e->operands) collect_names(op, out);
}

// ---------------------------------------------------------------------------

namespace {

class TropParser {
public:
    explicit TropParser(std::string_view text) : s_(text) {}

    TropExpr parse() {
        TropExpr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::SyntaxError, msg + " at column " + std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_digit() {
        skip();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    std::string digits() {
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(b, pos_ - b));
    }

    // integer ['/' positive-integer]
    Rational number() {
        std::string text = digits();
        std::size_t save = pos_;
        if (accept('/') && at_digit()) {
            text += "/" + digits();
        } else {
            pos_ = save;
        }
        try {
            return parse_rational(text);
        } catch (const Error&) {
            fail("malformed number '" + text + "'");
        }
    }

    TropExpr expr() {
        TropExpr left = term();
        for (;;) {
            if (accept('+')) {
                left = trop::plus({left, term()});
            } else if (peek('-')) {
                ++pos_;
                left = trop::minus(left, term());
            } else {
                return left;
            }
        }
    }

    TropExpr term() {
        skip();
        std::size_t save = pos_;
        bool negative = false;
        if (s_.substr(pos_, 1) == "-") {
            ++pos_;
            negative = true;
        }
        if (at_digit()) {
            std::string k = digits();
            if (accept('*')) {
                long scale = std::stol(k);
                return trop::scale(negative ? -scale : scale, unary());
            }
        }
        pos_ = save;
        return unary();
    }

    TropExpr unary() {
        skip();
        if (accept('-')) {
            skip();
            if (s_.substr(pos_, 3) == "inf") {
                pos_ += 3;
                return trop::lit(TropicalValue::neg_inf());
            }
            if (at_digit()) return trop::lit(TropicalValue(Rational(-number())));
            return trop::scale(-1, unary());
        }
        return atom();
    }

    TropExpr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (at_digit()) return trop::lit(TropicalValue(number()));
        if (accept('(')) {
            TropExpr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name(s_.substr(b, pos_ - b));
            if (name == "max" && peek('(')) {
                expect('(');
                std::vector<TropExpr> ops{expr()};
                while (accept(',')) ops.push_back(expr());
                expect(')');
                if (ops.size() < 2) fail("max needs at least two operands");
                return trop::max(std::move(ops));
            }
            return trop::var(std::move(name));
        }
        fail(std::string("unexpected character '") + s_[pos_] + "'");
    }
};

}  // namespace

TropExpr parse_trop_expr(std::string_view text) {
    return TropParser(text).parse();
}

}  // namespace udc
