#include <evlint/source.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evlint {

namespace {

constexpr std::string_view kUtf8Bom = "\xEF\xBB\xBF";

std::string stripBom(std::string text)
{
    if (text.starts_with(kUtf8Bom))
        text.erase(0, kUtf8Bom.size());
    return text;
}

} // namespace

SourceFile::SourceFile(std::string path, std::string text)
    : m_path(std::move(path)), m_text(stripBom(std::move(text)))
{
    m_lineStarts.push_back(0);
    for (std::size_t i = 0; i < m_text.size(); ++i)
        if (m_text[i] == '\n' && i + 1 < m_text.size())
            m_lineStarts.push_back(i + 1);
}

Position SourceFile::positionOf(std::size_t offset) const
{
    offset = std::min(offset, m_text.size());
    auto it = std::upper_bound(m_lineStarts.begin(), m_lineStarts.end(), offset);
    auto lineIndex = static_cast<std::size_t>(std::distance(m_lineStarts.begin(), it)) - 1;
    return Position{static_cast<std::uint32_t>(lineIndex + 1),
                    static_cast<std::uint32_t>(offset - m_lineStarts[lineIndex] + 1)};
}

Span SourceFile::spanOf(std::size_t begin, std::size_t end) const
{
    auto start = positionOf(begin);
    auto stop = positionOf(end);
    return Span{begin, end, start.line, start.column, stop.line, stop.column};
}

std::string_view SourceFile::lineText(std::size_t line) const
{
    if (line == 0 || line > lineCount())
        return {};
    std::size_t begin = m_lineStarts[line - 1];
    std::size_t end = line < m_lineStarts.size() ? m_lineStarts[line] : m_text.size();
    std::string_view view(m_text.data() + begin, end - begin);
    if (view.ends_with('\n'))
        view.remove_suffix(1);
    if (view.ends_with('\r'))
        view.remove_suffix(1);
    return view;
}

std::string_view SourceFile::slice(const Span& span) const
{
    return slice(span.begin, span.end);
}

std::string_view SourceFile::slice(std::size_t begin, std::size_t end) const
{
    begin = std::min(begin, m_text.size());
    end = std::clamp(end, begin, m_text.size());
    return std::string_view(m_text).substr(begin, end - begin);
}

SourceFile loadSourceFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read " + path.string());
    return SourceFile(path.generic_string(), buffer.str());
}

std::vector<std::string> splitLines(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto end = nl == std::string_view::npos ? text.size() : nl;
        auto line = text.substr(pos, end - pos);
        if (line.ends_with('\r'))
            line.remove_suffix(1);
        lines.emplace_back(line);
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    return lines;
}

} // namespace evlint
