#pragma once

#include <evlint/ast.hpp>
#include <evlint/lexer.hpp>

#include <span>

namespace evlint {

/// Parses a token stream into a SourceUnit. Never throws on malformed input:
/// unsupported or broken constructs become Unparsed statements and/or entries
/// in SourceUnit::parseErrors, with recovery at the next ';' or matching '}'.
SourceUnit parse(std::span<const Token> tokens, const SourceFile& file);

/// Convenience: tokenize then parse. Lexical errors are appended to the
/// unit's parse errors.
SourceUnit parseFile(const SourceFile& file);

struct StatementParse {
    StmtPtr stmt;
    std::vector<ParseError> errors;
};

/// Parses text holding exactly one statement, e.g. an emit extracted from a
/// larger file.
StatementParse parseStatement(const SourceFile& fragment);

} // namespace evlint
