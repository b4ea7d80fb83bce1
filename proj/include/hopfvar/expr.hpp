#pragma once

#include <cctype>
#include <memory>
#include <string>

#include "hopfvar/common.hpp"

namespace hopfvar {

/// Rational expressions over z: +, -, *, /, integer powers, parentheses,
/// real literals and the imaginary unit i. Evaluation plus symbolic
/// differentiation, which the trajectory tracer uses for step control.
namespace expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind { constant, variable, add, sub, mul, div, neg, pow };

struct Node {
    Kind kind;
    cplx value{};  // constant
    int exponent = 1;
    NodePtr a, b;
};

inline NodePtr constant(cplx v) { return std::make_shared<Node>(Node{Kind::constant, v, 1, {}, {}}); }
inline NodePtr variable() { return std::make_shared<Node>(Node{Kind::variable, {}, 1, {}, {}}); }

inline bool is_const(const NodePtr& n, cplx v) {
    return n->kind == Kind::constant && n->value == v;
}

inline NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a, {0, 0})) return b;
    if (is_const(b, {0, 0})) return a;
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value + b->value);
    return std::make_shared<Node>(Node{Kind::add, {}, 1, std::move(a), std::move(b)});
}
inline NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(b, {0, 0})) return a;
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value - b->value);
    return std::make_shared<Node>(Node{Kind::sub, {}, 1, std::move(a), std::move(b)});
}
inline NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a, {0, 0}) || is_const(b, {0, 0})) return constant({0, 0});
    if (is_const(a, {1, 0})) return b;
    if (is_const(b, {1, 0})) return a;
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value * b->value);
    return std::make_shared<Node>(Node{Kind::mul, {}, 1, std::move(a), std::move(b)});
}
inline NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a, {0, 0})) return constant({0, 0});
    if (is_const(b, {1, 0})) return a;
    return std::make_shared<Node>(Node{Kind::div, {}, 1, std::move(a), std::move(b)});
}
inline NodePtr neg(NodePtr a) {
    if (a->kind == Kind::constant) return constant(-a->value);
    return std::make_shared<Node>(Node{Kind::neg, {}, 1, std::move(a), {}});
}
inline NodePtr pow(NodePtr a, int n) {
    if (n == 0) return constant({1, 0});
    if (n == 1) return a;
    return std::make_shared<Node>(Node{Kind::pow, {}, n, std::move(a), {}});
}

inline cplx eval(const Node& n, cplx z) {
    switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::variable: return z;
        case Kind::add: return eval(*n.a, z) + eval(*n.b, z);
        case Kind::sub: return eval(*n.a, z) - eval(*n.b, z);
        case Kind::mul: return eval(*n.a, z) * eval(*n.b, z);
        case Kind::div: return eval(*n.a, z) / eval(*n.b, z);
        case Kind::neg: return -eval(*n.a, z);
        case Kind::pow: {
            const cplx base = eval(*n.a, z);
            const int e = n.exponent;
            cplx r(1, 0);
            cplx p = e < 0 ? 1.0 / base : base;
            for (int k = std::abs(e); k > 0; k >>= 1) {
                if (k & 1) r *= p;
                p *= p;
            }
            return r;
        }
    }
    return {};
}

inline NodePtr derivative(const NodePtr& n) {
    switch (n->kind) {
        case Kind::constant: return constant({0, 0});
        case Kind::variable: return constant({1, 0});
        case Kind::add: return add(derivative(n->a), derivative(n->b));
        case Kind::sub: return sub(derivative(n->a), derivative(n->b));
        case Kind::mul:
            return add(mul(derivative(n->a), n->b), mul(n->a, derivative(n->b)));
        case Kind::div:
            return div(sub(mul(derivative(n->a), n->b), mul(n->a, derivative(n->b))),
                       pow(n->b, 2));
        case Kind::neg: return neg(derivative(n->a));
        case Kind::pow:
            return mul(mul(constant({double(n->exponent), 0}), pow(n->a, n->exponent - 1)),
                       derivative(n->a));
    }
    return {};
}

class Parser {
public:
    explicit Parser(std::string src) : src_(std::move(src)) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing input");
        return e;
    }

private:
    std::string src_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression parse error at position " +
                                    std::to_string(pos_) + ": " + what);
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expression() {
        NodePtr e = term();
        for (;;) {
            if (eat('+'))
                e = add(e, term());
            else if (eat('-'))
                e = sub(e, term());
            else
                return e;
        }
    }
    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (eat('*'))
                e = mul(e, factor());
            else if (eat('/'))
                e = div(e, factor());
            else
                return e;
        }
    }
    NodePtr factor() {
        if (eat('-')) return neg(factor());
        if (eat('+')) return factor();
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) {
            bool negative = eat('-');
            skip_ws();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                fail("integer exponent expected");
            int e = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                e = e * 10 + (src_[pos_++] - '0');
            return pow(base, negative ? -e : e);
        }
        return base;
    }
    NodePtr atom() {
        skip_ws();
        if (eat('(')) {
            NodePtr e = expression();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == 'z' || c == 'Z') {
                ++pos_;
                return variable();
            }
            if (c == 'i' || c == 'I') {
                ++pos_;
                return constant({0, 1});
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                char* end = nullptr;
                const double v = std::strtod(src_.c_str() + pos_, &end);
                pos_ = end - src_.c_str();
                // trailing i makes an imaginary literal
                if (pos_ < src_.size() && (src_[pos_] == 'i' || src_[pos_] == 'I')) {
                    ++pos_;
                    return constant({0, v});
                }
                return constant({v, 0});
            }
        }
        fail("unexpected token");
    }
};

} // namespace expr

struct Expression {
    expr::NodePtr root;
    std::string source;

    cplx operator()(cplx z) const { return expr::eval(*root, z); }
    Expression derivative() const { return {expr::derivative(root), "d/dz(" + source + ")"}; }
};

inline Expression parse_expression(const std::string& src) {
    return {expr::Parser(src).parse(), src};
}

} // namespace hopfvar
