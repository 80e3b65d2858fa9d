#include <evlint/loc.hpp>

#include <cctype>

namespace evlint {

std::vector<LineKind> classifyLines(const SourceFile& file)
{
    std::vector<LineKind> kinds;
    kinds.reserve(file.lineCount());
    bool inBlock = false;
    for (std::size_t line = 1; line <= file.lineCount(); ++line) {
        std::string_view text = file.lineText(line);
        bool hasCode = false;
        bool hasComment = inBlock;
        char quote = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            char next = i + 1 < text.size() ? text[i + 1] : '\0';
            if (inBlock) {
                if (c == '*' && next == '/') {
                    inBlock = false;
                    ++i;
                }
            } else if (quote) {
                if (c == '\\')
                    ++i;
                else if (c == quote)
                    quote = 0;
            } else if (c == '/' && next == '/') {
                hasComment = true;
                break;
            } else if (c == '/' && next == '*') {
                inBlock = true;
                hasComment = true;
                ++i;
            } else if (c == '"' || c == '\'') {
                quote = c;
                hasCode = true;
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                hasCode = true;
            }
        }
        kinds.push_back(hasCode ? LineKind::Code : hasComment ? LineKind::Comment : LineKind::Blank);
    }
    return kinds;
}

LocStats tally(const std::vector<LineKind>& kinds)
{
    LocStats stats;
    stats.totalLines = kinds.size();
    for (auto k : kinds) {
        switch (k) {
        case LineKind::Code: ++stats.codeLines; break;
        case LineKind::Comment: ++stats.commentLines; break;
        case LineKind::Blank: ++stats.blankLines; break;
        }
    }
    return stats;
}

LocStats countLoc(const SourceFile& file)
{
    return tally(classifyLines(file));
}

} // namespace evlint
