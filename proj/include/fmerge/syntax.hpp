#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"

namespace fmerge {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::string token, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what +
                             (token.empty() ? std::string(" at end of input")
                                            : " near '" + token + "'")),
          line_(line),
          column_(column),
          token_(std::move(token)),
          message_(what) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string token_;
    std::string message_;
};

namespace detail {

enum class Tok { ident, kw_true, kw_false, lparen, rparen, bang, amp, bar, arrow, biarrow, end };

struct Token {
    Tok type;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src, std::size_t first_line = 1)
        : src_(src), line_(first_line) {}

    Token next() {
        skip_blank();
        const std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::end, "", line, col};
        const char c = src_[pos_];
        auto single = [&](Tok t) {
            advance(1);
            return Token{t, std::string(1, c), line, col};
        };
        switch (c) {
        case '(': return single(Tok::lparen);
        case ')': return single(Tok::rparen);
        case '!': return single(Tok::bang);
        case '&': return single(Tok::amp);
        case '|': return single(Tok::bar);
        default: break;
        }
        if (src_.substr(pos_, 2) == "->") {
            advance(2);
            return {Tok::arrow, "->", line, col};
        }
        if (src_.substr(pos_, 3) == "<->") {
            advance(3);
            return {Tok::biarrow, "<->", line, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_ + 1;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            std::string word(src_.substr(pos_, end - pos_));
            advance(end - pos_);
            Tok t = word == "true" ? Tok::kw_true : word == "false" ? Tok::kw_false : Tok::ident;
            return {t, std::move(word), line, col};
        }
        throw ParseError(line, col, std::string(1, c), "unexpected character");
    }

private:
    void advance(std::size_t n) {
        pos_ += n;
        col_ += n;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src, std::size_t first_line) : lexer_(src, first_line) {
        shift();
    }

    Formula parse_all() {
        Formula f = iff();
        if (cur_.type != Tok::end) fail("unexpected token");
        return f;
    }

private:
    void shift() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(cur_.line, cur_.column, cur_.text, what);
    }

    Formula iff() {
        Formula lhs = implies();
        while (cur_.type == Tok::biarrow) {
            shift();
            lhs = Formula::equivalence(std::move(lhs), implies());
        }
        return lhs;
    }

    Formula implies() {
        Formula lhs = disj();
        if (cur_.type != Tok::arrow) return lhs;
        shift();
        return Formula::implication(std::move(lhs), implies());
    }

    Formula disj() {
        std::vector<Formula> ops{conj()};
        while (cur_.type == Tok::bar) {
            shift();
            ops.push_back(conj());
        }
        return Formula::disjunction(std::move(ops));
    }

    Formula conj() {
        std::vector<Formula> ops{neg()};
        while (cur_.type == Tok::amp) {
            shift();
            ops.push_back(neg());
        }
        return Formula::conjunction(std::move(ops));
    }

    Formula neg() {
        if (cur_.type == Tok::bang) {
            shift();
            return Formula::negation(neg());
        }
        return primary();
    }

    Formula primary() {
        switch (cur_.type) {
        case Tok::ident: {
            Formula f = Formula::atom(cur_.text);
            shift();
            return f;
        }
        case Tok::kw_true:
        case Tok::kw_false: {
            Formula f = Formula::constant(cur_.type == Tok::kw_true);
            shift();
            return f;
        }
        case Tok::lparen: {
            shift();
            Formula f = iff();
            if (cur_.type != Tok::rparen) fail("expected ')'");
            shift();
            return f;
        }
        case Tok::end: fail("unexpected end of input");
        default: fail("expected a variable, constant or '('");
        }
    }

    Lexer lexer_;
    Token cur_{Tok::end, "", 1, 1};
};

// Binding strength: higher binds tighter.
inline int precedence(Kind k) {
    switch (k) {
    case Kind::equivalence: return 1;
    case Kind::implication: return 2;
    case Kind::disjunction: return 3;
    case Kind::conjunction: return 4;
    case Kind::negation: return 5;
    default: return 6;
    }
}

inline void print_to(const Formula& f, std::string& out);

inline void print_operand(const Formula& f, bool parens, std::string& out) {
    if (parens) out += '(';
    print_to(f, out);
    if (parens) out += ')';
}

inline void print_to(const Formula& f, std::string& out) {
    const int prec = precedence(f.kind());
    auto kids = f.children();
    switch (f.kind()) {
    case Kind::constant: out += f.value() ? "true" : "false"; return;
    case Kind::atom: out += f.name(); return;
    case Kind::negation:
        out += '!';
        print_operand(kids[0], precedence(kids[0].kind()) < prec, out);
        return;
    case Kind::conjunction:
    case Kind::disjunction: {
        const char* sep = f.kind() == Kind::conjunction ? " & " : " | ";
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) out += sep;
            print_operand(kids[i], precedence(kids[i].kind()) <= prec, out);
        }
        return;
    }
    case Kind::implication:
        // right-associative
        print_operand(kids[0], precedence(kids[0].kind()) <= prec, out);
        out += " -> ";
        print_operand(kids[1], precedence(kids[1].kind()) < prec, out);
        return;
    case Kind::equivalence:
        // left-associative
        print_operand(kids[0], precedence(kids[0].kind()) < prec, out);
        out += " <-> ";
        print_operand(kids[1], precedence(kids[1].kind()) <= prec, out);
        return;
    }
}

}  // namespace detail

/// Parses a formula. Precedence from tightest: `!`, `&`, `|`, `->`, `<->`.
/// `->` groups to the right, `<->` to the left. `#` starts a line comment.
/// `first_line` offsets reported line numbers for text embedded in a file.
inline Formula parse(std::string_view text, std::size_t first_line = 1) {
    return detail::Parser(text, first_line).parse_all();
}

/// Renders with the fewest parentheses that still parse back to the same tree.
inline std::string print(const Formula& f) {
    std::string out;
    detail::print_to(f, out);
    return out;
}

}  // namespace fmerge
