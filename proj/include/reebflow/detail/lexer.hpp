#pragma once

// Shared tokenizer for the scalar-expression and form-literal parsers.

#include <cctype>
#include <string>

#include "reebflow/expr.hpp"

namespace reebflow::detail {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End } kind{};
    double number = 0.0;
    std::string ident;
    char op = 0;
    size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : src_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t end = 0;
            try {
                tok_.number = std::stod(src_.substr(pos_), &end);
            } catch (const std::exception&) {
                throw ParseError("malformed number", pos_);
            }
            tok_.kind = Token::Kind::Number;
            pos_ += end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.ident = src_.substr(start, pos_ - start);
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Kind::Op;
                tok_.op = c;
                break;
            case '(': tok_.kind = Token::Kind::LParen; break;
            case ')': tok_.kind = Token::Kind::RParen; break;
            case ',': tok_.kind = Token::Kind::Comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", pos_);
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    Token tok_;
};

}  // namespace reebflow::detail
