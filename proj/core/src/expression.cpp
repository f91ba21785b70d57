#include "loewner/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace loewner {

struct Expression::Node {
    enum class Kind { constant, var_z, var_t, negate, add, sub, mul, div, pow, exp, sin, cos, abs, conj };

    Kind kind;
    Complex value{};
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    Complex eval(Complex z, double t) const {
        switch (kind) {
        case Kind::constant: return value;
        case Kind::var_z: return z;
        case Kind::var_t: return {t, 0.0};
        case Kind::negate: return -lhs->eval(z, t);
        case Kind::add: return lhs->eval(z, t) + rhs->eval(z, t);
        case Kind::sub: return lhs->eval(z, t) - rhs->eval(z, t);
        case Kind::mul: return lhs->eval(z, t) * rhs->eval(z, t);
        case Kind::div: return lhs->eval(z, t) / rhs->eval(z, t);
        case Kind::pow: {
            const Complex b = lhs->eval(z, t);
            const Complex e = rhs->eval(z, t);
            // Integer exponents by repeated multiplication keep z^2 exact and
            // well defined at z = 0.
            if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
                const int n = static_cast<int>(e.real());
                Complex acc{1.0, 0.0};
                for (int k = 0; k < std::abs(n); ++k) acc *= b;
                return n >= 0 ? acc : 1.0 / acc;
            }
            return std::pow(b, e);
        }
        case Kind::exp: return std::exp(lhs->eval(z, t));
        case Kind::sin: return std::sin(lhs->eval(z, t));
        case Kind::cos: return std::cos(lhs->eval(z, t));
        case Kind::abs: return {std::abs(lhs->eval(z, t)), 0.0};
        case Kind::conj: return std::conj(lhs->eval(z, t));
        }
        return {};
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Node::Kind k, Complex v = {}) {
    return std::make_shared<const Node>(Node{k, v, nullptr, nullptr});
}
NodePtr unary(Node::Kind k, NodePtr a) {
    return std::make_shared<const Node>(Node{k, {}, std::move(a), nullptr});
}
NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    return std::make_shared<const Node>(Node{k, {}, std::move(a), std::move(b)});
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression: " + msg, 1, static_cast<int>(pos_) + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    // Returns the operator character, mapping the two-byte UTF-8 forms of
    // multiplication and division signs; 0 if none.
    char peek_op() {
        skip_space();
        if (pos_ >= text_.size()) return 0;
        const char c = text_[pos_];
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') return c;
        if (text_.substr(pos_, 2) == "\xC3\x97") return 'x';
        if (text_.substr(pos_, 2) == "\xC3\xB7") return 'd';
        return 0;
    }

    void consume_op(char op) { pos_ += (op == 'x' || op == 'd') ? 2 : 1; }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            const char op = peek_op();
            if (op != '+' && op != '-') return lhs;
            consume_op(op);
            lhs = binary(op == '+' ? Node::Kind::add : Node::Kind::sub, lhs, term());
        }
    }

    NodePtr term() {
        NodePtr lhs = unary_expr();
        for (;;) {
            const char op = peek_op();
            if (op == '*' || op == 'x') {
                consume_op(op);
                lhs = binary(Node::Kind::mul, lhs, unary_expr());
            } else if (op == '/' || op == 'd') {
                consume_op(op);
                lhs = binary(Node::Kind::div, lhs, unary_expr());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary_expr() {
        const char op = peek_op();
        if (op == '-') {
            consume_op(op);
            return unary(Node::Kind::negate, unary_expr());
        }
        if (op == '+') {
            consume_op(op);
            return unary_expr();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek_op() == '^') {
            consume_op('^');
            return binary(Node::Kind::pow, base, unary_expr());
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "i") return leaf(Node::Kind::constant, {0.0, 1.0});
            if (name == "z") return leaf(Node::Kind::var_z);
            if (name == "t") return leaf(Node::Kind::var_t);
            if (name == "pi") return leaf(Node::Kind::constant, {kPi, 0.0});
            Node::Kind fn;
            if (name == "exp") fn = Node::Kind::exp;
            else if (name == "sin") fn = Node::Kind::sin;
            else if (name == "cos") fn = Node::Kind::cos;
            else if (name == "abs") fn = Node::Kind::abs;
            else if (name == "conj") fn = Node::Kind::conj;
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            expect('(');
            NodePtr arg = expr();
            expect(')');
            return unary(fn, arg);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        double v = 0.0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(res.ptr - first);
        return leaf(Node::Kind::constant, {v, 0.0});
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    return Expression(parser.parse(), std::string(text));
}

Complex Expression::operator()(Complex z, double t) const { return root_->eval(z, t); }

} // namespace loewner
