#pragma once

#include <functional>
#include <memory>
#include <string>

namespace solitons {

// Compiled closed-form expression in the variable s (and the integer n of the
// profile it belongs to). Grammar: + - * / ^, sqrt, log, exp, parentheses,
// numeric literals, identifiers s and n. '^' is right-associative.
class Expression {
public:
    static Expression parse(const std::string& text);

    double eval(double s, double n) const;

    const std::string& text() const { return text_; }

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::string text);

    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace solitons
