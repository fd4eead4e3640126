#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "iacopt/doml/ast.hpp"

namespace iacopt::doml {

enum class TokenKind {
    identifier,
    string,
    number,
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    comma,
    equals,
    fat_arrow,
    percent,
    end_of_input,
};

struct Token {
    TokenKind kind = TokenKind::end_of_input;
    std::string text;    // identifier spelling or string contents (unquoted)
    double number = 0.0; // valid when kind == number
    int line = 1;
    int column = 1;
    std::size_t offset = 0;
};

/// Tokenizes the DOML subset: identifiers [A-Za-z_][A-Za-z0-9_.]*, double-quoted
/// strings, reals with '.' separator, punctuation and `//` comments.
class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            bool done = t.kind == TokenKind::end_of_input;
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

private:
    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }
    static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (pos_ >= src_.size()) return;
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (peek() != '\n' && peek() != '\0') advance();
            } else {
                break;
            }
        }
    }

    Token make(TokenKind kind, int line, int column, std::size_t offset,
               std::string text = {}, double number = 0.0) const {
        return Token{kind, std::move(text), number, line, column, offset};
    }

    Token next() {
        skip_trivia();
        int line = line_, column = column_;
        std::size_t offset = pos_;
        char c = peek();
        if (c == '\0') return make(TokenKind::end_of_input, line, column, offset);

        switch (c) {
        case '{': advance(); return make(TokenKind::lbrace, line, column, offset, "{");
        case '}': advance(); return make(TokenKind::rbrace, line, column, offset, "}");
        case '[': advance(); return make(TokenKind::lbracket, line, column, offset, "[");
        case ']': advance(); return make(TokenKind::rbracket, line, column, offset, "]");
        case ',': advance(); return make(TokenKind::comma, line, column, offset, ",");
        case '%': advance(); return make(TokenKind::percent, line, column, offset, "%");
        case '=':
            advance();
            if (peek() == '>') {
                advance();
                return make(TokenKind::fat_arrow, line, column, offset, "=>");
            }
            return make(TokenKind::equals, line, column, offset, "=");
        case '"': {
            advance();
            std::string value;
            while (peek() != '"') {
                char d = peek();
                if (d == '\0' || d == '\n')
                    throw ParseError("unterminated string literal", line, column);
                value.push_back(d);
                advance();
            }
            advance();  // closing quote
            return make(TokenKind::string, line, column, offset, std::move(value));
        }
        default: break;
        }

        if (is_digit(c) || (c == '-' && is_digit(peek(1)))) {
            std::string text;
            if (c == '-') {
                text.push_back('-');
                advance();
            }
            while (is_digit(peek())) {
                text.push_back(peek());
                advance();
            }
            if (peek() == '.' && is_digit(peek(1))) {
                text.push_back('.');
                advance();
                while (is_digit(peek())) {
                    text.push_back(peek());
                    advance();
                }
            }
            return make(TokenKind::number, line, column, offset, text, std::stod(text));
        }

        if (is_ident_start(c)) {
            std::string text;
            while (is_ident_char(peek())) {
                text.push_back(peek());
                advance();
            }
            return make(TokenKind::identifier, line, column, offset, std::move(text));
        }

        throw ParseError(std::string("unexpected character '") + c + "'", line, column);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace iacopt::doml
