#include "foswe/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace foswe {

struct Expr::Node {
    enum class Op {
        Const, Var, Add, Sub, Mul, Div, Pow, Neg,
        Sin, Cos, Tan, Exp, Log, Tanh, Sqrt, Abs
    };
    Op op;
    double value = 0.0;
    int var = 0; // 0:x1 1:x2 2:r 3:s
    std::shared_ptr<const Node> a, b;

    double eval(const Expr::Vars& v) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var:
                switch (var) {
                    case 0: return v.x1;
                    case 1: return v.x2;
                    case 2: return v.r;
                    default: return v.s;
                }
            case Op::Add: return a->eval(v) + b->eval(v);
            case Op::Sub: return a->eval(v) - b->eval(v);
            case Op::Mul: return a->eval(v) * b->eval(v);
            case Op::Div: return a->eval(v) / b->eval(v);
            case Op::Pow: return std::pow(a->eval(v), b->eval(v));
            case Op::Neg: return -a->eval(v);
            case Op::Sin: return std::sin(a->eval(v));
            case Op::Cos: return std::cos(a->eval(v));
            case Op::Tan: return std::tan(a->eval(v));
            case Op::Exp: return std::exp(a->eval(v));
            case Op::Log: return std::log(a->eval(v));
            case Op::Tanh: return std::tanh(a->eval(v));
            case Op::Sqrt: return std::sqrt(a->eval(v));
            case Op::Abs: return std::abs(a->eval(v));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw SimError(ErrorCode::ConfigInvalid,
                       "expression error at position " + std::to_string(pos) + ": " + what +
                           " in \"" + s + "\"");
    }

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (true) {
            if (eat('+'))
                lhs = make(Op::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make(Op::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (true) {
            if (eat('*'))
                lhs = make(Op::Mul, lhs, parse_unary());
            else if (eat('/'))
                lhs = make(Op::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make(Op::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) {
            // right associative; exponent may itself be signed
            NodePtr expo = parse_unary();
            return make(Op::Pow, base, expo);
        }
        return base;
    }

    NodePtr parse_atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (eat('(')) {
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        fail("unexpected character");
    }

    NodePtr parse_number() {
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                s[end] == 'e' || s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos &&
                 (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        double v = 0.0;
        try {
            v = std::stod(s.substr(pos, end - pos));
        } catch (...) {
            fail("bad number");
        }
        pos = end;
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::Const;
        n->value = v;
        return n;
    }

    NodePtr parse_ident() {
        size_t end = pos;
        while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) ||
                                  s[end] == '_'))
            ++end;
        std::string name = s.substr(pos, end - pos);
        pos = end;
        auto var = [&](int idx) {
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::Var;
            n->var = idx;
            return NodePtr(n);
        };
        if (name == "x1") return var(0);
        if (name == "x2") return var(1);
        if (name == "r") return var(2);
        if (name == "s") return var(3);
        if (name == "pi") {
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::Const;
            n->value = kPi;
            return n;
        }
        static const std::vector<std::pair<std::string, Op>> funcs = {
            {"sin", Op::Sin}, {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},
            {"log", Op::Log}, {"tanh", Op::Tanh}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs}};
        for (const auto& [fname, op] : funcs) {
            if (name == fname) {
                if (!eat('(')) fail("expected '(' after function name");
                NodePtr arg = parse_expr();
                if (!eat(')')) fail("missing ')'");
                return make(op, arg);
            }
        }
        fail("unknown identifier '" + name + "'");
    }
};

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.parse_expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    e.text_ = text;
    return e;
}

double Expr::eval(const Vars& v) const {
    if (!root_) throw SimError(ErrorCode::ConfigInvalid, "evaluating empty expression");
    return root_->eval(v);
}

} // namespace foswe
