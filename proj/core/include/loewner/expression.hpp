#pragma once

// Small expression language for declaring p(z, t) in scenario files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'i' | 'z' | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := exp | sin | cos | abs | conj
//
// The unicode operators U+00D7 and U+00F7 are accepted as * and /.
// Implicit multiplication is not supported ("2z" is an error, "2*z" is fine).

#include <memory>
#include <string>
#include <string_view>

#include "loewner/hypgeo.hpp"

namespace loewner {

class Expression {
public:
    /// Throws ParseError with line 1 and the 1-based column of the offending
    /// character.
    static Expression parse(std::string_view text);

    Complex operator()(Complex z, double t) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace loewner
