#pragma once

#include <evlint/source.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace evlint {

enum class TokenKind { Keyword, Identifier, NumberLit, StringLit, Punct, Operator };

std::string_view toString(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string lexeme;
    Span span;

    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    bool isPunct(std::string_view text) const { return is(TokenKind::Punct, text); }
    bool isKeyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
    bool isOperator(std::string_view text) const { return is(TokenKind::Operator, text); }
};

enum class LexErrorKind { UnterminatedString, UnterminatedComment };

struct LexError {
    LexErrorKind kind;
    Span span;
};

std::string_view toString(LexErrorKind kind);

struct TokenStream {
    std::vector<Token> tokens;
    std::vector<LexError> errors;
    /// Byte ranges of every comment, in source order.
    std::vector<Span> comments;
    /// Byte ranges of string literals, including unterminated ones.
    std::vector<Span> strings;

    /// True when the offset falls inside a comment or a string literal.
    bool inCommentOrString(std::size_t offset) const;
};

/// Splits a file into tokens. Whitespace and comments are consumed, not
/// emitted. Lexical errors are recorded and scanning resumes at the next line.
TokenStream tokenize(const SourceFile& file);

bool isKeyword(std::string_view word);

/// uint, int8, bytes32, address, bool, string, ...
bool isElementaryTypeName(std::string_view word);

} // namespace evlint
