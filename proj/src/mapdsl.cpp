#include "udc/mapdsl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace udc {

namespace ex {

namespace {
std::shared_ptr<ExprNode> node(ExprKind kind) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    return n;
}
Expr binary(ExprKind kind, Expr a, Expr b) {
    auto n = node(kind);
    n->operands = {std::move(a), std::move(b)};
    return n;
}
}  // namespace

Expr lit(Rational v) {
    auto n = node(ExprKind::Lit);
    n->literal = std::move(v);
    return n;
}
Expr var(std::string name) {
    auto n = node(ExprKind::Var);
    n->name = std::move(name);
    return n;
}
Expr param(std::string name) {
    auto n = node(ExprKind::Param);
    n->name = std::move(name);
    return n;
}
Expr add(Expr a, Expr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return binary(ExprKind::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return binary(ExprKind::Mul, std::move(a), std::move(b)); }
Expr div(Expr a, Expr b) { return binary(ExprKind::Div, std::move(a), std::move(b)); }
Expr neg(Expr a) {
    auto n = node(ExprKind::Neg);
    n->operands = {std::move(a)};
    return n;
}
Expr pow(Expr base, long exponent) {
    auto n = node(ExprKind::Pow);
    n->operands = {std::move(base)};
    n->exponent = exponent;
    return n;
}

}  // namespace ex

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Lit: return a->literal == b->literal;
        case ExprKind::Var:
        case ExprKind::Param: return a->name == b->name;
        case ExprKind::Pow:
            if (a->exponent != b->exponent) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < a->operands.size(); ++i)
        if (!structurally_equal(a->operands[i], b->operands[i])) return false;
    return true;
}

std::size_t node_count(const Expr& e) {
    std::size_t n = 1;
    for (const auto& op : e->operands) n += node_count(op);
    return n;
}

// ---------------------------------------------------------------------------
// Printing.

namespace {

int precedence(const Expr& e) {
    switch (e->kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Pow: return 3;
        case ExprKind::Lit: return sgn(e->literal) < 0 ? 0 : 4;
        default: return 4;
    }
}

std::string print_at(const Expr& e, int min_prec) {
    std::string s = to_string(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

bool starts_with_digit(const Expr& e) {
    if (e->kind == ExprKind::Lit) return sgn(e->literal) >= 0;
    if (e->kind == ExprKind::Pow) return starts_with_digit(e->operands[0]);
    return false;
}

}  // namespace

std::string to_string(const Expr& e) {
    const auto& ops = e->operands;
    switch (e->kind) {
        case ExprKind::Lit: return to_string(e->literal);
        case ExprKind::Var:
        case ExprKind::Param: return e->name;
        case ExprKind::Add: return print_at(ops[0], 1) + " + " + print_at(ops[1], 2);
        case ExprKind::Sub: return print_at(ops[0], 1) + " - " + print_at(ops[1], 2);
        case ExprKind::Mul: return print_at(ops[0], 2) + "*" + print_at(ops[1], 3);
        case ExprKind::Div: {
            // `2/3` would re-read as a rational literal.
            std::string right = starts_with_digit(ops[1]) ? "(" + to_string(ops[1]) + ")" : print_at(ops[1], 3);
            return print_at(ops[0], 2) + "/" + right;
        }
        case ExprKind::Neg: return "-" + print_at(ops[0], 4);
        case ExprKind::Pow: {
            std::string k = e->exponent < 0 ? "(" + std::to_string(e->exponent) + ")" : std::to_string(e->exponent);
            return print_at(ops[0], 4) + "^" + k;
        }
    }
    return {};
}

bool is_subtraction_free(const Expr& e) {
    switch (e->kind) {
        case ExprKind::Sub:
        case ExprKind::Neg: return false;
        case ExprKind::Lit: return sgn(e->literal) > 0;
        default: break;
    }
    return std::all_of(e->operands.begin(), e->operands.end(), [](const Expr& op) { return is_subtraction_free(op); });
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::string>& vars, const std::vector<std::string>& params,
               std::size_t line, std::size_t column_offset)
        : s_(text), vars_(vars), params_(params), line_(line), col0_(column_offset) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    const std::vector<std::string>& vars_;
    const std::vector<std::string>& params_;
    std::size_t line_;
    std::size_t col0_;
    std::size_t pos_ = 0;

    std::string where() const {
        std::string w;
        if (line_) w += "line " + std::to_string(line_) + ", ";
        return w + "column " + std::to_string(col0_ + pos_ + 1);
    }

    [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) const {
        throw Error(code, msg + " (" + where() + ")");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
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

    Expr expr() {
        Expr left = term();
        for (;;) {
            if (accept('+'))
                left = ex::add(left, term());
            else if (accept('-'))
                left = ex::sub(left, term());
            else
                return left;
        }
    }

    Expr term() {
        Expr left = factor();
        for (;;) {
            if (accept('*'))
                left = ex::mul(left, factor());
            else if (accept('/'))
                left = ex::div(left, factor());
            else
                return left;
        }
    }

    Expr factor() {
        Expr base = atom();
        if (!accept('^')) return base;
        return ex::pow(base, exponent());
    }

    long exponent() {
        bool parens = accept('(');
        bool negative = accept('-');
        if (!at_digit()) {
            if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '('))
                fail("exponent must be an integer", ErrorCode::NonIntegerExponent);
            fail("expected integer exponent");
        }
        std::string k = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') fail("exponent must be an integer", ErrorCode::NonIntegerExponent);
        if (parens) {
            if (peek('/') || peek('.') || peek('*') || peek('+') || peek('-'))
                fail("exponent must be an integer", ErrorCode::NonIntegerExponent);
            if (!accept(')')) fail("expected ')'");
        }
        long value = 0;
        try {
            value = std::stol(k);
        } catch (const std::exception&) {
            fail("exponent out of range");
        }
        return negative ? -value : value;
    }

    Expr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (c == '-') {
            ++pos_;
            return ex::neg(atom());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = digits();
            std::size_t save = pos_;
            if (accept('/') && at_digit()) {
                std::string den = digits();
                if (std::any_of(den.begin(), den.end(), [](char d) { return d != '0'; }))
                    return ex::lit(parse_rational(num + "/" + den));
            }
            pos_ = save;
            if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported; use p/q");
            return ex::lit(parse_rational(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(b, pos_ - b));
            if (std::find(vars_.begin(), vars_.end(), name) != vars_.end()) return ex::var(name);
            if (std::find(params_.begin(), params_.end(), name) != params_.end()) return ex::param(name);
            pos_ = b;
            fail("undeclared name '" + name + "'", ErrorCode::UndeclaredName);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

struct RawLine {
    std::size_t number;
    std::string text;
};

struct MapSource {
    std::string kind = "rational";
    std::optional<RawLine> vars;
    std::optional<RawLine> params;
    std::vector<RawLine> updates;
};

MapSource split_source(std::string_view text) {
    MapSource src;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto header = [&](std::string_view key) {
            return t.rfind(key, 0) == 0 && t.size() > key.size() &&
                   trim(std::string_view(t).substr(key.size())).rfind(':', 0) == 0;
        };
        auto header_value = [&] { return trim(std::string_view(t).substr(t.find(':') + 1)); };
        if (header("vars")) {
            if (src.vars) throw Error(ErrorCode::SyntaxError, "duplicate vars line (line " + std::to_string(number) + ")");
            src.vars = RawLine{number, header_value()};
        } else if (header("params")) {
            if (src.params) throw Error(ErrorCode::SyntaxError, "duplicate params line (line " + std::to_string(number) + ")");
            src.params = RawLine{number, header_value()};
        } else if (header("kind")) {
            src.kind = header_value();
            if (src.kind != "rational" && src.kind != "tropical")
                throw Error(ErrorCode::SyntaxError, "unknown map kind '" + src.kind + "' (line " + std::to_string(number) + ")");
        } else {
            src.updates.push_back(RawLine{number, line});
        }
    }
    if (!src.vars) throw Error(ErrorCode::SyntaxError, "missing 'vars:' line");
    return src;
}

std::vector<std::string> parse_name_list(const RawLine& line) {
    std::vector<std::string> names;
    if (trim(line.text).empty()) return names;
    for (auto& n : split(line.text, ',')) {
        if (!is_identifier(n))
            throw Error(ErrorCode::SyntaxError, "invalid name '" + n + "' (line " + std::to_string(line.number) + ")");
        names.push_back(n);
    }
    return names;
}

struct UpdateLine {
    std::string target;
    std::string rhs;
    std::size_t rhs_column;
    std::size_t line;
};

UpdateLine split_update(const RawLine& raw) {
    const std::string& s = raw.text;
    auto fail = [&](const std::string& msg, std::size_t col) {
        return Error(ErrorCode::SyntaxError, msg + " (line " + std::to_string(raw.number) + ", column " + std::to_string(col + 1) + ")");
    };
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw fail("expected `name' = expr`", 0);
    std::string lhs = trim(std::string_view(s).substr(0, eq));
    if (lhs.empty() || lhs.back() != '\'') throw fail("update target must be written `name'`", 0);
    lhs = trim(std::string_view(lhs).substr(0, lhs.size() - 1));
    if (!is_identifier(lhs)) throw fail("invalid update target '" + lhs + "'", 0);
    return UpdateLine{lhs, s.substr(eq + 1), eq + 1, raw.number};
}

void check_disjoint(const std::vector<std::string>& state, const std::vector<std::string>& params) {
    std::set<std::string> seen;
    for (const auto& n : state)
        if (!seen.insert(n).second) throw Error(ErrorCode::InvalidMap, "duplicate name '" + n + "'");
    for (const auto& n : params)
        if (!seen.insert(n).second) throw Error(ErrorCode::InvalidMap, "name '" + n + "' declared twice");
}

template <class U>
std::vector<U> order_updates(const std::vector<std::string>& state, std::vector<std::pair<UpdateLine, U>> parsed) {
    std::vector<std::optional<U>> slots(state.size());
    for (auto& [line, u] : parsed) {
        auto it = std::find(state.begin(), state.end(), line.target);
        if (it == state.end())
            throw Error(ErrorCode::UndeclaredName,
                        "update for undeclared variable '" + line.target + "' (line " + std::to_string(line.line) + ")");
        auto& slot = slots[static_cast<std::size_t>(it - state.begin())];
        if (slot)
            throw Error(ErrorCode::InvalidMap,
                        "second update for '" + line.target + "' (line " + std::to_string(line.line) + ")");
        slot = std::move(u);
    }
    std::vector<U> out;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!slots[i]) throw Error(ErrorCode::InvalidMap, "missing update for '" + state[i] + "'");
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace

Expr parse_expr(std::string_view text, const std::vector<std::string>& vars, const std::vector<std::string>& params) {
    return ExprParser(text, vars, params, 0, 0).parse();
}

bool is_tropical_map_text(std::string_view text) {
    return split_source(text).kind == "tropical";
}

RationalMap parse_map(std::string_view text) {
    MapSource src = split_source(text);
    if (src.kind != "rational") throw Error(ErrorCode::InvalidMap, "expected a rational map, found kind: tropical");

    RationalMap m;
    m.state = parse_name_list(*src.vars);
    if (m.state.empty()) throw Error(ErrorCode::InvalidMap, "no state variables declared");
    std::vector<std::string> param_names;
    if (src.params && !trim(src.params->text).empty()) {
        for (auto& item : split(src.params->text, ',')) {
            auto arrow = item.find("->");
            ParamDecl d;
            d.name = trim(std::string_view(item).substr(0, arrow));
            d.alias = arrow == std::string::npos ? tropical_name(d.name) : trim(std::string_view(item).substr(arrow + 2));
            if (!is_identifier(d.name) || !is_identifier(d.alias))
                throw Error(ErrorCode::SyntaxError,
                            "invalid parameter declaration '" + item + "' (line " + std::to_string(src.params->number) + ")");
            param_names.push_back(d.name);
            m.params.push_back(d);
        }
    }
    check_disjoint(m.state, param_names);

    std::vector<std::pair<UpdateLine, Expr>> parsed;
    for (const auto& raw : src.updates) {
        UpdateLine u = split_update(raw);
        Expr e = ExprParser(u.rhs, m.state, param_names, u.line, u.rhs_column).parse();
        parsed.emplace_back(std::move(u), std::move(e));
    }
    m.updates = order_updates(m.state, std::move(parsed));
    return m;
}

TropicalMap parse_tropical_map(std::string_view text) {
    MapSource src = split_source(text);
    if (src.kind != "tropical") throw Error(ErrorCode::InvalidMap, "expected `kind: tropical`");

    TropicalMap m;
    m.state = parse_name_list(*src.vars);
    if (m.state.empty()) throw Error(ErrorCode::InvalidMap, "no state variables declared");
    if (src.params) m.params = parse_name_list(*src.params);
    check_disjoint(m.state, m.params);

    std::vector<std::pair<UpdateLine, TropExpr>> parsed;
    for (const auto& raw : src.updates) {
        UpdateLine u = split_update(raw);
        TropExpr e;
        try {
            e = parse_trop_expr(u.rhs);
        } catch (const Error& err) {
            throw Error(err.code(), std::string(err.what()) + " (line " + std::to_string(u.line) + ")");
        }
        std::vector<std::string> names;
        collect_names(e, names);
        for (const auto& n : names)
            if (std::find(m.state.begin(), m.state.end(), n) == m.state.end() &&
                std::find(m.params.begin(), m.params.end(), n) == m.params.end())
                throw Error(ErrorCode::UndeclaredName, "undeclared name '" + n + "' (line " + std::to_string(u.line) + ")");
        parsed.emplace_back(std::move(u), std::move(e));
    }
    m.updates = order_updates(m.state, std::move(parsed));
    return m;
}

std::optional<std::size_t> RationalMap::index_of(std::string_view name) const {
    auto it = std::find(state.begin(), state.end(), name);
    if (it == state.end()) return std::nullopt;
    return static_cast<std::size_t>(it - state.begin());
}

bool RationalMap::is_param(std::string_view name) const {
    return std::any_of(params.begin(), params.end(), [&](const ParamDecl& p) { return p.name == name; });
}

std::optional<std::size_t> TropicalMap::index_of(std::string_view name) const {
    auto it = std::find(state.begin(), state.end(), name);
    if (it == state.end()) return std::nullopt;
    return static_cast<std::size_t>(it - state.begin());
}

namespace {
std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}
}  // namespace

std::string to_string(const RationalMap& m) {
    std::string s = "vars: " + join(m.state, ", ") + "\n";
    if (!m.params.empty()) {
        std::vector<std::string> ps;
        for (const auto& p : m.params) ps.push_back(p.name + " -> " + p.alias);
        s += "params: " + join(ps, ", ") + "\n";
    }
    for (std::size_t i = 0; i < m.state.size(); ++i) s += m.state[i] + "' = " + to_string(m.updates[i]) + "\n";
    return s;
}

std::string to_string(const TropicalMap& m) {
    std::string s = "kind: tropical\nvars: " + join(m.state, ", ") + "\n";
    if (!m.params.empty()) s += "params: " + join(m.params, ", ") + "\n";
    for (std::size_t i = 0; i < m.state.size(); ++i) s += m.state[i] + "' = " + to_string(m.updates[i]) + "\n";
    return s;
}

bool structurally_equal(const RationalMap& a, const RationalMap& b) {
    if (a.state != b.state || a.params.size() != b.params.size() || a.updates.size() != b.updates.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].name != b.params[i].name || a.params[i].alias != b.params[i].alias) return false;
    for (std::size_t i = 0; i < a.updates.size(); ++i)
        if (!structurally_equal(a.updates[i], b.updates[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Ultradiscretization by operator replacement.

std::string tropical_name(std::string_view state_name) {
    std::string s(state_name);
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

namespace {

template <class Rename>
TropExpr replace_ops(const Expr& e, const Rename& rename) {
    const auto& ops = e->operands;
    switch (e->kind) {
        case ExprKind::Lit:
            if (sgn(e->literal) <= 0)
                throw Error(ErrorCode::NotSubtractionFree, "non-positive literal " + to_string(e->literal));
            return trop::lit(TropicalValue(0));
        case ExprKind::Var:
        case ExprKind::Param: return trop::var(rename(*e));
        case ExprKind::Add: return trop::max({replace_ops(ops[0], rename), replace_ops(ops[1], rename)});
        case ExprKind::Mul: return trop::plus({replace_ops(ops[0], rename), replace_ops(ops[1], rename)});
        case ExprKind::Div: return trop::minus(replace_ops(ops[0], rename), replace_ops(ops[1], rename));
        case ExprKind::Pow: return trop::scale(e->exponent, replace_ops(ops[0], rename));
        case ExprKind::Sub:
        case ExprKind::Neg: throw Error(ErrorCode::NotSubtractionFree, "subtraction in '" + to_string(e) + "'");
    }
    throw Error(ErrorCode::NotSubtractionFree, to_string(e));
}

}  // namespace

TropExpr ultradiscretize(const Expr& e, const RationalMap& context) {
    return replace_ops(e, [&](const ExprNode& n) {
        if (n.kind == ExprKind::Param) {
            for (const auto& p : context.params)
                if (p.name == n.name) return p.alias;
        }
        return tropical_name(n.name);
    });
}

TropExpr ultradiscretize(const Expr& e) {
    return replace_ops(e, [](const ExprNode& n) { return n.name; });
}

TropicalMap ultradiscretize(const RationalMap& m) {
    TropicalMap t;
    std::set<std::string> seen;
    for (const auto& s : m.state) {
        t.state.push_back(tropical_name(s));
        if (!seen.insert(t.state.back()).second)
            throw Error(ErrorCode::InvalidMap, "tropical name '" + t.state.back() + "' is ambiguous");
    }
    for (const auto& p : m.params) {
        t.params.push_back(p.alias);
        if (!seen.insert(p.alias).second) throw Error(ErrorCode::InvalidMap, "tropical name '" + p.alias + "' is ambiguous");
    }
    for (std::size_t i = 0; i < m.updates.size(); ++i) {
        try {
            t.updates.push_back(ultradiscretize(m.updates[i], m));
        } catch (const Error& err) {
            throw Error(err.code(), "update of '" + m.state[i] + "': " + err.what());
        }
    }
    return t;
}

std::vector<TropicalValue> step(const TropicalMap& m, const std::vector<TropicalValue>& state, const TropEnv& params) {
    TropEnv env = params;
    for (std::size_t i = 0; i < m.state.size(); ++i) env[m.state[i]] = state[i];
    std::vector<TropicalValue> next;
    next.reserve(m.updates.size());
    for (const auto& u : m.updates) next.push_back(eval_trop(u, env));
    return next;
}

std::vector<std::vector<TropicalValue>> orbit(const TropicalMap& m, std::vector<TropicalValue> init, const TropEnv& params,
                                              std::size_t steps) {
    if (init.size() != m.state.size()) throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
    std::vector<std::vector<TropicalValue>> out{std::move(init)};
    for (std::size_t n = 0; n < steps; ++n) out.push_back(step(m, out.back(), params));
    return out;
}

// ---------------------------------------------------------------------------

std::vector<LimitDeviation> numeric_ud_check(const Expr& e, const TropEnv& assignment,
                                             const std::vector<Rational>& eps_list) {
    TropExpr F = ultradiscretize(e);
    TropicalValue exact = eval_trop(F, assignment);
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (sgn(eps_list[i]) <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
        if (i && eps_list[i] >= eps_list[i - 1]) throw Error(ErrorCode::InvalidArgument, "epsilon list must be strictly decreasing");
    }

    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<LimitDeviation> out;
    for (const auto& eps_q : eps_list) {
        const double eps = to_double(eps_q);
        // log f(e^{X/eps}) computed without forming e^{X/eps}.
        struct LogOps {
            double lit(const Rational& c) const { return std::log(to_double(c)); }
            double add(double a, double b) const {
                if (a == neg_inf) return b;
                if (b == neg_inf) return a;
                double hi = std::max(a, b), lo = std::min(a, b);
                return hi + std::log1p(std::exp(lo - hi));
            }
            double sub(double, double) const { return std::numeric_limits<double>::quiet_NaN(); }
            double mul(double a, double b) const { return a + b; }
            double div(double a, double b) const { return a - b; }
            double neg(double) const { return std::numeric_limits<double>::quiet_NaN(); }
            double pow(double a, long k) const { return a == neg_inf && k == 0 ? 0.0 : static_cast<double>(k) * a; }
        };
        auto lookup = [&](const std::string& name) -> double {
            auto it = assignment.find(name);
            if (it == assignment.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' is not bound");
            return it->second.is_finite() ? to_double(it->second.value()) / eps : neg_inf;
        };
        LimitDeviation d;
        d.epsilon = eps;
        double value = eps * evaluate<double>(e, lookup, LogOps{});
        if (exact.is_neg_inf() && value == neg_inf) {
            d.deviation = 0.0;
        } else if (!std::isfinite(value) || exact.is_neg_inf()) {
            d.error = std::string(to_string(ErrorCode::OverflowAtEpsilon)) + ": value not representable at eps = " +
                      to_string(eps_q);
        } else {
            d.deviation = std::fabs(value - to_double(exact.value()));
        }
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace udc
