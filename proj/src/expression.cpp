#include "solitons/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "solitons/util.hpp"

namespace solitons {

struct Expression::Node {
    enum class Kind { constant, var_s, var_n, add, sub, mul, div, pow, neg, sqrt, log, exp };
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double s, double n) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::var_s: return s;
            case Kind::var_n: return n;
            case Kind::add: return lhs->eval(s, n) + rhs->eval(s, n);
            case Kind::sub: return lhs->eval(s, n) - rhs->eval(s, n);
            case Kind::mul: return lhs->eval(s, n) * rhs->eval(s, n);
            case Kind::div: return lhs->eval(s, n) / rhs->eval(s, n);
            case Kind::pow: return std::pow(lhs->eval(s, n), rhs->eval(s, n));
            case Kind::neg: return -lhs->eval(s, n);
            case Kind::sqrt: return std::sqrt(lhs->eval(s, n));
            case Kind::log: return std::log(lhs->eval(s, n));
            case Kind::exp: return std::exp(lhs->eval(s, n));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::constant;
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return e;
    }

private:
    NodePtr parse_sum() {
        NodePtr e = parse_product();
        for (;;) {
            skip_ws();
            if (consume('+'))
                e = make(Kind::add, e, parse_product());
            else if (consume('-'))
                e = make(Kind::sub, e, parse_product());
            else
                return e;
        }
    }

    NodePtr parse_product() {
        NodePtr e = parse_unary();
        for (;;) {
            skip_ws();
            if (consume('*'))
                e = make(Kind::mul, e, parse_unary());
            else if (consume('/'))
                e = make(Kind::div, e, parse_unary());
            else
                return e;
        }
    }

    NodePtr parse_unary() {
        skip_ws();
        if (consume('-')) return make(Kind::neg, parse_unary());
        if (consume('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        skip_ws();
        if (consume('^')) return make(Kind::pow, base, parse_unary());  // right-assoc
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                id += text_[pos_++];
            if (id == "s") return make(Kind::var_s);
            if (id == "n") return make(Kind::var_n);
            if (id == "sqrt" || id == "log" || id == "exp") {
                skip_ws();
                if (!consume('(')) fail("expected '(' after " + id);
                NodePtr arg = parse_sum();
                skip_ws();
                if (!consume(')')) fail("expected ')'");
                if (id == "sqrt") return make(Kind::sqrt, arg);
                if (id == "log") return make(Kind::log, arg);
                return make(Kind::exp, arg);
            }
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
        return nullptr;
    }

    NodePtr parse_number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return make_const(v);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ValidationError("expression '" + text_ + "': " + why + " at offset " +
                              std::to_string(pos_));
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    return Expression(p.run(), text);
}

double Expression::eval(double s, double n) const { return root_->eval(s, n); }

}  // namespace solitons
