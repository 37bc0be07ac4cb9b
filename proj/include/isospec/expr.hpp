#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace isospec::expr {

enum class Op : std::uint8_t {
    Const, Var,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Ln, Sqrt, Abs,
    Sign, // not in the surface grammar as an operator; produced by d/dx abs, sign(0) = 0
};

struct Node {
    Op op;
    std::int32_t a = -1; // left / only child
    std::int32_t b = -1; // right child (binary ops)
    double value = 0.0;  // payload for Const
};

// Immutable scalar function of one named variable, stored as a flat arena.
// Children always precede parents, so evaluation is a single forward pass;
// shared subtrees are allowed (differentiate produces them).
class Expression {
public:
    Expression() = default;

    double operator()(double x) const;

    const std::string& variable() const { return variable_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::int32_t root() const { return root_; }
    bool empty() const { return nodes_.empty(); }

private:
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    std::string variable_;

    friend class Builder;
    friend Expression parse(std::string_view, std::string_view);
    friend Expression differentiate(const Expression&);
};

// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' unary)?          right-associative, binds tighter than unary '-'
//   base   := number | variable | name '(' expr ')' | '(' expr ')'
//   number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
// Builtin names: sin cos tan exp ln sqrt abs sign. Any other identifier must
// equal `variable`. Throws parse_error with a byte offset otherwise.
Expression parse(std::string_view source, std::string_view variable);

// Same as e(x). Out-of-domain input raises domain_error, never returns NaN/Inf.
double evaluate(const Expression& e, double x);

// Exact symbolic derivative with respect to the declared variable.
// Only constant folding and identity cleanups (u+0, u*1, u^1, -(-u)) are applied.
Expression differentiate(const Expression& e);

// Minimal-parentheses text form; parse(render(e), var) has the same structure as e.
std::string render(const Expression& e);

// Structural comparison (op/value/shape), ignoring arena layout and sharing.
bool same_structure(const Expression& a, const Expression& b);

} // namespace isospec::expr
