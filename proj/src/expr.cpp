#include "isospec/expr.hpp"
#include "isospec/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <utility>

namespace isospec::expr {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_integer(double v) {
    return std::rint(v) == v && std::fabs(v) < 9.007199254740992e15;
}

// Shared scalar kernel for evaluate() and constant folding. Throws domain_error;
// folding callers catch and keep the node unfolded so the error surfaces at runtime.
// var == nullptr means "folding a literal"; the message string is only built on throw.
std::string at_where(const char* var, double x) {
    return var ? std::string("at ") + var + " = " + fmt(x) : std::string("in a literal");
}

double apply(Op op, double a, double b, const char* var, double x) {
    auto where = [&] { return at_where(var, x); };
    double r;
    switch (op) {
    case Op::Add: r = a + b; break;
    case Op::Sub: r = a - b; break;
    case Op::Mul: r = a * b; break;
    case Op::Div:
        if (b == 0.0) throw domain_error("division by zero " + where());
        r = a / b;
        break;
    case Op::Pow:
        if (a < 0.0 && !is_integer(b))
            throw domain_error("negative base with non-integer exponent " + where());
        if (a == 0.0 && b < 0.0)
            throw domain_error("zero raised to a negative power " + where());
        r = std::pow(a, b);
        break;
    case Op::Neg: r = -a; break;
    case Op::Sin: r = std::sin(a); break;
    case Op::Cos: r = std::cos(a); break;
    case Op::Tan: r = std::tan(a); break;
    case Op::Exp: r = std::exp(a); break;
    case Op::Ln:
        if (a <= 0.0) throw domain_error("ln of a non-positive value " + where());
        r = std::log(a);
        break;
    case Op::Sqrt:
        if (a < 0.0) throw domain_error("sqrt of a negative value " + where());
        r = std::sqrt(a);
        break;
    case Op::Abs: r = std::fabs(a); break;
    case Op::Sign: r = (a > 0.0) ? 1.0 : (a < 0.0) ? -1.0 : 0.0; break;
    default: throw error("apply: not an operator");
    }
    if (!std::isfinite(r))
        throw domain_error("non-finite result " + where());
    return r;
}

bool is_const(const std::vector<Node>& n, std::int32_t i, double v) {
    return n[i].op == Op::Const && n[i].value == v;
}

} // namespace

// Appends nodes bottom-up, folding literal arithmetic and trivial identities.
class Builder {
public:
    explicit Builder(std::vector<Node>& nodes) : n_(nodes) {}

    std::int32_t cnst(double v) {
        n_.push_back({Op::Const, -1, -1, v});
        return last();
    }
    std::int32_t var() {
        n_.push_back({Op::Var, -1, -1, 0.0});
        return last();
    }

    std::int32_t unary(Op op, std::int32_t a) {
        if (op == Op::Neg) {
            if (n_[a].op == Op::Const) return cnst(-n_[a].value);
            if (n_[a].op == Op::Neg) return n_[a].a;
        } else if (n_[a].op == Op::Const) {
            try {
                return cnst(apply(op, n_[a].value, 0.0, nullptr, 0.0));
            } catch (const domain_error&) {
                // keep the node; evaluation will report it
            }
        }
        n_.push_back({op, a, -1, 0.0});
        return last();
    }

    std::int32_t binary(Op op, std::int32_t a, std::int32_t b) {
        if (n_[a].op == Op::Const && n_[b].op == Op::Const) {
            try {
                return cnst(apply(op, n_[a].value, n_[b].value, nullptr, 0.0));
            } catch (const domain_error&) {
            }
        }
        // identity cleanups that cannot change domain behavior
        switch (op) {
        case Op::Add:
            if (is_const(n_, b, 0.0)) return a;
            if (is_const(n_, a, 0.0)) return b;
            break;
        case Op::Sub:
            if (is_const(n_, b, 0.0)) return a;
            if (is_const(n_, a, 0.0)) return unary(Op::Neg, b);
            break;
        case Op::Mul:
            if (is_const(n_, b, 1.0)) return a;
            if (is_const(n_, a, 1.0)) return b;
            break;
        case Op::Div:
            if (is_const(n_, b, 1.0)) return a;
            break;
        case Op::Pow:
            if (is_const(n_, b, 1.0)) return a;
            break;
        default:
            break;
        }
        n_.push_back({op, a, b, 0.0});
        return last();
    }

private:
    std::int32_t last() const { return static_cast<std::int32_t>(n_.size() - 1); }
    std::vector<Node>& n_;
};

double Expression::operator()(double x) const {
    if (root_ < 0) throw error("evaluate: empty expression");
    thread_local std::vector<double> v;
    v.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& nd = nodes_[i];
        switch (nd.op) {
        case Op::Const: v[i] = nd.value; break;
        case Op::Var: v[i] = x; break;
        default:
            v[i] = apply(nd.op, v[nd.a], nd.b >= 0 ? v[nd.b] : 0.0, variable_.c_str(), x);
            break;
        }
    }
    return v[root_];
}

double evaluate(const Expression& e, double x) { return e(x); }

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
    enum Kind { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::size_t off;
    double num = 0.0;
    std::string_view text;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::size_t off) { out.push_back({k, off, 0.0, {}}); };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
        if (c == '+') { push(Token::Plus, i++); continue; }
        if (c == '-') { push(Token::Minus, i++); continue; }
        // U+2212 (minus sign), in case sources paste typographic text
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
            static_cast<unsigned char>(s[i + 1]) == 0x88 &&
            static_cast<unsigned char>(s[i + 2]) == 0x92) {
            push(Token::Minus, i);
            i += 3;
            continue;
        }
        if (c == '*') { push(Token::Star, i++); continue; }
        if (c == '/') { push(Token::Slash, i++); continue; }
        if (c == '^') { push(Token::Caret, i++); continue; }
        if (c == '(') { push(Token::LParen, i++); continue; }
        if (c == ')') { push(Token::RParen, i++); continue; }
        if (c >= '0' && c <= '9') {
            std::size_t start = i;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
            if (i + 1 < s.size() && s[i] == '.' && s[i + 1] >= '0' && s[i + 1] <= '9') {
                ++i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && s[j] >= '0' && s[j] <= '9') {
                    ++j;
                    while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
                    i = j;
                }
            }
            double val = 0.0;
            auto res = std::from_chars(s.data() + start, s.data() + i, val);
            if (res.ec != std::errc())
                throw parse_error("malformed number", start);
            Token t{Token::Num, start, val, s.substr(start, i - start)};
            out.push_back(t);
            continue;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t start = i;
            while (i < s.size() &&
                   ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= 'A' && s[i] <= 'Z') ||
                    (s[i] >= '0' && s[i] <= '9') || s[i] == '_'))
                ++i;
            out.push_back({Token::Ident, start, 0.0, s.substr(start, i - start)});
            continue;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({Token::End, s.size(), 0.0, {}});
    return out;
}

Op builtin(std::string_view name) {
    if (name == "sin") return Op::Sin;
    if (name == "cos") return Op::Cos;
    if (name == "tan") return Op::Tan;
    if (name == "exp") return Op::Exp;
    if (name == "ln") return Op::Ln;
    if (name == "sqrt") return Op::Sqrt;
    if (name == "abs") return Op::Abs;
    if (name == "sign") return Op::Sign;
    return Op::Const; // sentinel: not a builtin
}

struct Parser {
    const std::vector<Token>& t;
    std::string_view var;
    Builder& b;
    std::size_t i = 0;

    const Token& cur() const { return t[i]; }
    bool eat(Token::Kind k) {
        if (t[i].kind == k) { ++i; return true; }
        return false;
    }

    std::int32_t expr() {
        std::int32_t lhs = term();
        for (;;) {
            if (eat(Token::Plus)) lhs = b.binary(Op::Add, lhs, term());
            else if (eat(Token::Minus)) lhs = b.binary(Op::Sub, lhs, term());
            else return lhs;
        }
    }
    std::int32_t term() {
        std::int32_t lhs = unary();
        for (;;) {
            if (eat(Token::Star)) lhs = b.binary(Op::Mul, lhs, unary());
            else if (eat(Token::Slash)) lhs = b.binary(Op::Div, lhs, unary());
            else return lhs;
        }
    }
    // '^' binds tighter than unary '-', so -x^2 is -(x^2)
    std::int32_t unary() {
        if (eat(Token::Minus)) return b.unary(Op::Neg, unary());
        return factor();
    }
    std::int32_t factor() {
        std::int32_t base_idx = base();
        if (eat(Token::Caret)) return b.binary(Op::Pow, base_idx, unary());
        return base_idx;
    }
    std::int32_t base() {
        const Token& tok = cur();
        switch (tok.kind) {
        case Token::Num:
            ++i;
            return b.cnst(tok.num);
        case Token::Ident: {
            ++i;
            if (cur().kind == Token::LParen) {
                Op op = builtin(tok.text);
                if (op == Op::Const)
                    throw parse_error("unknown function '" + std::string(tok.text) + "'", tok.off);
                ++i;
                std::int32_t arg = expr();
                if (!eat(Token::RParen))
                    throw parse_error("expected ')'", cur().off);
                return b.unary(op, arg);
            }
            if (tok.text == var) return b.var();
            throw parse_error("unknown identifier '" + std::string(tok.text) + "'", tok.off);
        }
        case Token::LParen: {
            ++i;
            std::int32_t inner = expr();
            if (!eat(Token::RParen))
                throw parse_error("expected ')'", cur().off);
            return inner;
        }
        default:
            throw parse_error("expected a number, name, or '('", tok.off);
        }
    }
};

} // namespace

Expression parse(std::string_view source, std::string_view variable) {
    Expression e;
    e.variable_ = std::string(variable);
    std::vector<Token> toks = tokenize(source);
    if (toks.size() == 1)
        throw parse_error("empty expression", 0);
    Builder b(e.nodes_);
    Parser p{toks, variable, b};
    e.root_ = p.expr();
    if (p.cur().kind != Token::End)
        throw parse_error("unexpected trailing input", p.cur().off);
    return e;
}

// ---------------------------------------------------- symbolic derivative

Expression differentiate(const Expression& e) {
    if (e.root_ < 0) throw error("differentiate: empty expression");
    Expression out;
    out.variable_ = e.variable_;
    Builder b(out.nodes_);
    const std::vector<Node>& src = e.nodes_;
    std::vector<std::int32_t> copied(src.size(), -1), derived(src.size(), -1);

    std::function<std::int32_t(std::int32_t)> copy = [&](std::int32_t i) -> std::int32_t {
        if (copied[i] >= 0) return copied[i];
        const Node& n = src[i];
        std::int32_t r;
        if (n.op == Op::Const) r = b.cnst(n.value);
        else if (n.op == Op::Var) r = b.var();
        else if (n.b >= 0) r = b.binary(n.op, copy(n.a), copy(n.b));
        else r = b.unary(n.op, copy(n.a));
        return copied[i] = r;
    };

    std::function<std::int32_t(std::int32_t)> deriv = [&](std::int32_t i) -> std::int32_t {
        if (derived[i] >= 0) return derived[i];
        const Node& n = src[i];
        std::int32_t r;
        switch (n.op) {
        case Op::Const: r = b.cnst(0.0); break;
        case Op::Var: r = b.cnst(1.0); break;
        case Op::Add: r = b.binary(Op::Add, deriv(n.a), deriv(n.b)); break;
        case Op::Sub: r = b.binary(Op::Sub, deriv(n.a), deriv(n.b)); break;
        case Op::Mul:
            r = b.binary(Op::Add, b.binary(Op::Mul, deriv(n.a), copy(n.b)),
                         b.binary(Op::Mul, copy(n.a), deriv(n.b)));
            break;
        case Op::Div:
            r = b.binary(Op::Div,
                         b.binary(Op::Sub, b.binary(Op::Mul, deriv(n.a), copy(n.b)),
                                  b.binary(Op::Mul, copy(n.a), deriv(n.b))),
                         b.binary(Op::Pow, copy(n.b), b.cnst(2.0)));
            break;
        case Op::Pow:
            if (src[n.b].op == Op::Const) {
                double c = src[n.b].value;
                if (c == 1.0) {
                    r = deriv(n.a);
                } else {
                    r = b.binary(Op::Mul,
                                 b.binary(Op::Mul, b.cnst(c),
                                          b.binary(Op::Pow, copy(n.a), b.cnst(c - 1.0))),
                                 deriv(n.a));
                }
            } else {
                // u^v * (v' ln u + v u'/u); real-valued only for u > 0, as is u^v itself
                r = b.binary(
                    Op::Mul, b.binary(Op::Pow, copy(n.a), copy(n.b)),
                    b.binary(Op::Add, b.binary(Op::Mul, deriv(n.b), b.unary(Op::Ln, copy(n.a))),
                             b.binary(Op::Mul, copy(n.b), b.binary(Op::Div, deriv(n.a), copy(n.a)))));
            }
            break;
        case Op::Neg: r = b.unary(Op::Neg, deriv(n.a)); break;
        case Op::Sin: r = b.binary(Op::Mul, b.unary(Op::Cos, copy(n.a)), deriv(n.a)); break;
        case Op::Cos:
            r = b.binary(Op::Mul, b.unary(Op::Neg, b.unary(Op::Sin, copy(n.a))), deriv(n.a));
            break;
        case Op::Tan:
            r = b.binary(Op::Div, deriv(n.a),
                         b.binary(Op::Pow, b.unary(Op::Cos, copy(n.a)), b.cnst(2.0)));
            break;
        case Op::Exp: r = b.binary(Op::Mul, b.unary(Op::Exp, copy(n.a)), deriv(n.a)); break;
        case Op::Ln: r = b.binary(Op::Div, deriv(n.a), copy(n.a)); break;
        case Op::Sqrt:
            r = b.binary(Op::Div, deriv(n.a),
                         b.binary(Op::Mul, b.cnst(2.0), b.unary(Op::Sqrt, copy(n.a))));
            break;
        case Op::Abs: r = b.binary(Op::Mul, b.unary(Op::Sign, copy(n.a)), deriv(n.a)); break;
        case Op::Sign: r = b.cnst(0.0); break; // zero almost everywhere; sign(0) := 0
        default: throw error("differentiate: bad node");
        }
        return derived[i] = r;
    };

    out.root_ = deriv(e.root_);
    return out;
}

// ----------------------------------------------------------------- render

namespace {

int precedence(const std::vector<Node>& n, std::int32_t i) {
    switch (n[i].op) {
    case Op::Add: case Op::Sub: return 1;
    case Op::Mul: case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n[i].value < 0.0 ? 3 : 5; // "-3" rebinds like unary minus
    default: return 5;
    }
}

const char* fn_name(Op op) {
    switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
    default: return nullptr;
    }
}

void render_num(double v, std::string& out) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void render_node(const Expression& e, std::int32_t i, std::string& out) {
    const auto& n = e.nodes();
    const Node& nd = n[i];
    auto child = [&](std::int32_t c, int min_prec) {
        bool paren = precedence(n, c) < min_prec;
        if (paren) out += '(';
        render_node(e, c, out);
        if (paren) out += ')';
    };
    switch (nd.op) {
    case Op::Const: render_num(nd.value, out); break;
    case Op::Var: out += e.variable(); break;
    case Op::Add: child(nd.a, 1); out += '+'; child(nd.b, 2); break;
    case Op::Sub: child(nd.a, 1); out += '-'; child(nd.b, 2); break;
    case Op::Mul: child(nd.a, 2); out += '*'; child(nd.b, 3); break;
    case Op::Div: child(nd.a, 2); out += '/'; child(nd.b, 3); break;
    case Op::Pow: child(nd.a, 5); out += '^'; child(nd.b, 3); break;
    case Op::Neg: out += '-'; child(nd.a, 3); break;
    default:
        out += fn_name(nd.op);
        out += '(';
        render_node(e, nd.a, out);
        out += ')';
        break;
    }
}

} // namespace

std::string render(const Expression& e) {
    if (e.root() < 0) throw error("render: empty expression");
    std::string out;
    render_node(e, e.root(), out);
    return out;
}

bool same_structure(const Expression& a, const Expression& b) {
    if ((a.root() < 0) != (b.root() < 0)) return false;
    if (a.root() < 0) return true;
    std::map<std::pair<std::int32_t, std::int32_t>, bool> memo;
    std::function<bool(std::int32_t, std::int32_t)> eq = [&](std::int32_t i, std::int32_t j) {
        auto key = std::make_pair(i, j);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const Node& x = a.nodes()[i];
        const Node& y = b.nodes()[j];
        bool r = x.op == y.op;
        if (r && x.op == Op::Const) r = x.value == y.value;
        if (r && x.a >= 0) r = y.a >= 0 && eq(x.a, y.a);
        if (r && x.b >= 0) r = y.b >= 0 && eq(x.b, y.b);
        if (r) r = (x.b >= 0) == (y.b >= 0);
        return memo[key] = r;
    };
    return eq(a.root(), b.root());
}

} // namespace isospec::expr
