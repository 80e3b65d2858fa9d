#pragma once

#include <evlint/lexer.hpp>
#include <evlint/source.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace evlint {

/// The emit-recognition pattern, applied verbatim (non-greedy argument
/// capture included).
inline constexpr std::string_view kEmitPattern = R"(\s+emit\s+(\w+)\s*\(([\s\S]*?)\)\s*)";

struct RegexEmitMatch {
    std::string eventName;
    std::string rawArgs;
    /// From the `emit` word through the closing parenthesis of the match.
    Span span;
    /// Set when the `emit` word sits inside a comment or string literal.
    bool inCommentOrString = false;
};

std::vector<RegexEmitMatch> extractEmitsRegex(const SourceFile& file);

/// Same, reusing an existing tokenization for the comment/string flag.
std::vector<RegexEmitMatch> extractEmitsRegex(const SourceFile& file, const TokenStream& tokens);

} // namespace evlint
