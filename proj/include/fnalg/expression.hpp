#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fnalg/catalog.hpp"
#include "fnalg/errors.hpp"
#include "fnalg/fn.hpp"
#include "fnalg/integration.hpp"

namespace fnalg::expr {

/// Expression grammar over catalog keys:
///
///   expr     := term (('+' | '-') term)*
///   term     := unary (('*' | '/') unary)*
///   unary    := '-' unary | chain
///   chain    := primary ('.' primary)*          composition, g applied first
///   primary  := NUMBER | KEY | '(' expr ')'
///             | 'inv' '(' expr ')'
///             | 'd' '(' expr ')'
///             | 'iter' '(' expr ',' INT ')'
///             | 'int' '(' expr ',' NUMBER ',' (NUMBER | 'x') ')'
///
/// Numeric literals denote constant functions. In int(...), a literal upper
/// limit yields the constant definite integral; 'x' yields the antiderivative
/// based at the lower limit. Literals need a leading digit ('.' always means
/// composition), so write 0.5 rather than .5.

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class NodeKind { literal, key, compose, add, sub, mul, div, neg, inv, deriv, iter, integral };

struct Node {
    NodeKind kind;
    Span span;
    double value = 0.0;          // literal
    std::string key;             // key
    std::vector<std::unique_ptr<Node>> children;
    int iterations = 0;          // iter
    double lo = 0.0;             // integral
    double hi = 0.0;             // integral (when bounded)
    bool upper_is_x = false;     // integral with the placeholder upper limit
};

namespace detail {

enum class TokenKind { number, ident, op, end };

struct Token {
    TokenKind kind;
    std::string text;
    double value = 0.0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view source) : source_(source) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < source_.size() && std::isspace(static_cast<unsigned char>(source_[pos_]))) {
            ++pos_;
        }
        if (pos_ >= source_.size()) {
            current_ = {TokenKind::end, "", 0.0, pos_};
            return;
        }
        const std::size_t start = pos_;
        const char c = source_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const char* begin = source_.data() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            // strtod would happily eat "1.sin" up to the 's'; it stops at '.'
            // only when no digits follow, which is exactly the compose case.
            std::size_t len = static_cast<std::size_t>(end - begin);
            if (len > 0 && begin[len - 1] == '.') --len;  // "3." then compose
            pos_ += len;
            current_ = {TokenKind::number, std::string(begin, len), v, start};
            if (len != static_cast<std::size_t>(end - begin)) {
                current_.value = std::strtod(current_.text.c_str(), nullptr);
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < source_.size() &&
                   (std::isalnum(static_cast<unsigned char>(source_[end])) ||
                    source_[end] == '_')) {
                ++end;
            }
            current_ = {TokenKind::ident, std::string(source_.substr(pos_, end - pos_)), 0.0, start};
            pos_ = end;
            return;
        }
        static constexpr std::string_view ops = "+-*/.(),";
        if (ops.find(c) != std::string_view::npos) {
            current_ = {TokenKind::op, std::string(1, c), 0.0, start};
            ++pos_;
            return;
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    std::string_view source_;
    std::size_t pos_ = 0;
    Token current_{TokenKind::end, "", 0.0, 0};
};

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source), lexer_(source) {}

    std::unique_ptr<Node> parse() {
        auto node = parse_expr();
        if (lexer_.peek().kind != TokenKind::end) {
            throw ParseError(lexer_.peek().pos,
                             "unexpected trailing input '" + lexer_.peek().text + "'");
        }
        return node;
    }

private:
    bool at_op(const char* text) const {
        return lexer_.peek().kind == TokenKind::op && lexer_.peek().text == text;
    }

    Token expect_op(const char* text) {
        if (!at_op(text)) {
            throw ParseError(lexer_.peek().pos, std::string("expected '") + text + "'");
        }
        return lexer_.take();
    }

    std::unique_ptr<Node> parse_expr() {
        auto lhs = parse_term();
        while (at_op("+") || at_op("-")) {
            const Token op = lexer_.take();
            auto rhs = parse_term();
            lhs = make_binary(op.text == "+" ? NodeKind::add : NodeKind::sub, std::move(lhs),
                              std::move(rhs));
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_term() {
        auto lhs = parse_unary();
        while (at_op("*") || at_op("/")) {
            const Token op = lexer_.take();
            auto rhs = parse_unary();
            lhs = make_binary(op.text == "*" ? NodeKind::mul : NodeKind::div, std::move(lhs),
                              std::move(rhs));
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_unary() {
        if (at_op("-")) {
            const Token op = lexer_.take();
            auto child = parse_unary();
            auto node = std::make_unique<Node>();
            node->kind = NodeKind::neg;
            node->span = {op.pos, child->span.end};
            node->children.push_back(std::move(child));
            return node;
        }
        return parse_chain();
    }

    std::unique_ptr<Node> parse_chain() {
        auto lhs = parse_primary();
        while (at_op(".")) {
            lexer_.take();
            auto rhs = parse_primary();
            lhs = make_binary(NodeKind::compose, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_primary() {
        const Token t = lexer_.peek();
        if (t.kind == TokenKind::number) {
            lexer_.take();
            auto node = std::make_unique<Node>();
            node->kind = NodeKind::literal;
            node->value = t.value;
            node->span = {t.pos, t.pos + t.text.size()};
            return node;
        }
        if (t.kind == TokenKind::op && t.text == "(") {
            lexer_.take();
            auto inner = parse_expr();
            const Token close = expect_op(")");
            inner->span = {t.pos, close.pos + 1};
            return inner;
        }
        if (t.kind == TokenKind::ident) {
            lexer_.take();
            if (t.text == "inv" || t.text == "d") {
                expect_op("(");
                auto child = parse_expr();
                const Token close = expect_op(")");
                auto node = std::make_unique<Node>();
                node->kind = t.text == "inv" ? NodeKind::inv : NodeKind::deriv;
                node->span = {t.pos, close.pos + 1};
                node->children.push_back(std::move(child));
                return node;
            }
            if (t.text == "iter") {
                expect_op("(");
                auto child = parse_expr();
                expect_op(",");
                const Token count = lexer_.take();
                if (count.kind != TokenKind::number || count.value != std::floor(count.value) ||
                    count.value < 0) {
                    throw ParseError(count.pos, "iter needs a non-negative integer count");
                }
                const Token close = expect_op(")");
                auto node = std::make_unique<Node>();
                node->kind = NodeKind::iter;
                node->span = {t.pos, close.pos + 1};
                node->iterations = static_cast<int>(count.value);
                node->children.push_back(std::move(child));
                return node;
            }
            if (t.text == "int") {
                expect_op("(");
                auto child = parse_expr();
                expect_op(",");
                const double lo = parse_signed_number("int lower limit");
                expect_op(",");
                auto node = std::make_unique<Node>();
                node->kind = NodeKind::integral;
                node->lo = lo;
                const Token upper = lexer_.peek();
                if (upper.kind == TokenKind::ident && upper.text == "x") {
                    lexer_.take();
                    node->upper_is_x = true;
                } else {
                    node->hi = parse_signed_number("int upper limit");
                }
                const Token close = expect_op(")");
                node->span = {t.pos, close.pos + 1};
                node->children.push_back(std::move(child));
                return node;
            }
            if (at_op("(")) {
                throw ParseError(lexer_.peek().pos,
                                 "'" + t.text +
                                     "' is not callable; operators are inv, d, iter, int, and "
                                     "composition is written with '.'");
            }
            auto node = std::make_unique<Node>();
            node->kind = NodeKind::key;
            node->key = t.text;
            node->span = {t.pos, t.pos + t.text.size()};
            return node;
        }
        throw ParseError(t.pos, t.kind == TokenKind::end ? "unexpected end of expression"
                                                         : "unexpected token '" + t.text + "'");
    }

    double parse_signed_number(const char* what) {
        double sign = 1.0;
        while (at_op("-")) {
            lexer_.take();
            sign = -sign;
        }
        const Token t = lexer_.take();
        if (t.kind != TokenKind::number) {
            throw ParseError(t.pos, std::string(what) + " must be a number");
        }
        return sign * t.value;
    }

    std::unique_ptr<Node> make_binary(NodeKind kind, std::unique_ptr<Node> lhs,
                                      std::unique_ptr<Node> rhs) {
        auto node = std::make_unique<Node>();
        node->kind = kind;
        node->span = {lhs->span.begin, rhs->span.end};
        node->children.push_back(std::move(lhs));
        node->children.push_back(std::move(rhs));
        return node;
    }

    std::string_view source_;
    Lexer lexer_;
};

}  // namespace detail

inline std::unique_ptr<Node> parse(std::string_view source) {
    return detail::Parser(source).parse();
}

namespace detail {

inline std::string slice(std::string_view source, Span span) {
    if (span.end > source.size()) span.end = source.size();
    if (span.begin > span.end) span.begin = span.end;
    return std::string(source.substr(span.begin, span.end - span.begin));
}

inline std::string at_span(std::string_view source, Span span) {
    return "'" + slice(source, span) + "' (chars " + std::to_string(span.begin) + ".." +
           std::to_string(span.end) + ")";
}

inline Fn build_node(const Node& node, const Catalog& cat, std::string_view source) {
    switch (node.kind) {
        case NodeKind::literal:
            return constant(node.value);
        case NodeKind::key: {
            const CatalogEntry& entry = cat.lookup(node.key);
            if (const Fn* f = std::get_if<Fn>(&entry.object)) return *f;
            throw CapabilityError("'" + node.key + "' is not a scalar function at " +
                                  at_span(source, node.span));
        }
        case NodeKind::compose:
            return build_node(*node.children[0], cat, source)
                .compose(build_node(*node.children[1], cat, source));
        case NodeKind::add:
            return add(build_node(*node.children[0], cat, source),
                       build_node(*node.children[1], cat, source));
        case NodeKind::sub:
            return sub(build_node(*node.children[0], cat, source),
                       build_node(*node.children[1], cat, source));
        case NodeKind::mul:
            return mul(build_node(*node.children[0], cat, source),
                       build_node(*node.children[1], cat, source));
        case NodeKind::div:
            return div(build_node(*node.children[0], cat, source),
                       build_node(*node.children[1], cat, source));
        case NodeKind::neg:
            return neg(build_node(*node.children[0], cat, source));
        case NodeKind::inv: {
            const Fn f = build_node(*node.children[0], cat, source);
            if (!f.invertible()) {
                throw CapabilityError("missing tier: invertible, in " +
                                      at_span(source, node.span));
            }
            return f.inverse();
        }
        case NodeKind::deriv: {
            const Fn f = build_node(*node.children[0], cat, source);
            if (!f.differentiable()) {
                throw CapabilityError("missing tier: differentiable, in " +
                                      at_span(source, node.span));
            }
            return f.derivative();
        }
        case NodeKind::iter:
            return iterate(build_node(*node.children[0], cat, source), node.iterations);
        case NodeKind::integral: {
            const Fn f = build_node(*node.children[0], cat, source);
            if (node.upper_is_x) return antiderivative(f, node.lo);
            return constant(definite_integral(f, node.lo, node.hi));
        }
    }
    throw Error("unreachable expression node");
}

}  // namespace detail

/// Parses and builds in one step. Parse errors carry a character position;
/// capability errors name the missing tier and quote the subexpression.
inline Fn build(std::string_view source, const Catalog& cat) {
    const auto ast = parse(source);
    return detail::build_node(*ast, cat, source);
}

}  // namespace fnalg::expr
