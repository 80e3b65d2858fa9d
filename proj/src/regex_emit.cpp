#include <evlint/regex_emit.hpp>

#include <boost/regex.hpp>

namespace evlint {

namespace {

const boost::regex& emitRegex()
{
    static const boost::regex re(std::string(kEmitPattern), boost::regex::perl);
    return re;
}

} // namespace

std::vector<RegexEmitMatch> extractEmitsRegex(const SourceFile& file)
{
    return extractEmitsRegex(file, tokenize(file));
}

std::vector<RegexEmitMatch> extractEmitsRegex(const SourceFile& file, const TokenStream& tokens)
{
    std::vector<RegexEmitMatch> out;
    const std::string& text = file.text();
    boost::sregex_iterator it(text.begin(), text.end(), emitRegex());
    for (boost::sregex_iterator end; it != end; ++it) {
        const auto& m = *it;
        // \s+ precedes the word, so the word starts right after the whitespace run.
        auto matchBegin = static_cast<std::size_t>(m.position(std::size_t{0}));
        std::size_t emitBegin = text.find("emit", matchBegin);
        auto argsEnd = static_cast<std::size_t>(m.position(std::size_t{2}) + m.length(2));
        RegexEmitMatch match;
        match.eventName = m.str(1);
        match.rawArgs = m.str(2);
        match.span = file.spanOf(emitBegin, argsEnd + 1);
        match.inCommentOrString = tokens.inCommentOrString(emitBegin);
        out.push_back(std::move(match));
    }
    return out;
}

} // namespace evlint
