#pragma once

#include <memory>
#include <string>

#include "foswe/core.hpp"

namespace foswe {

/// Arithmetic expression over the variables (x1, x2, r, s) with +-*/^,
/// parentheses, unary minus, the functions sin cos tan exp log tanh sqrt abs,
/// and the constant pi.  No general scripting; parse errors throw
/// ConfigInvalid.
class Expr {
public:
    struct Vars {
        double x1 = 0.0, x2 = 0.0, r = 0.0, s = 0.0;
    };

    Expr() = default;
    static Expr parse(const std::string& text);

    double eval(const Vars& v) const;
    bool valid() const { return static_cast<bool>(root_); }
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace foswe
