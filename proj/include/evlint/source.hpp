#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evlint {

struct Position {
    std::uint32_t line = 1;
    std::uint32_t column = 1;
};

/// A half-open byte range [begin, end) together with its 1-based line/column
/// coordinates. The end coordinate is the position just past the last byte.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::uint32_t startLine = 1;
    std::uint32_t startCol = 1;
    std::uint32_t endLine = 1;
    std::uint32_t endCol = 1;

    bool contains(const Span& other) const { return begin <= other.begin && other.end <= end; }
    bool containsOffset(std::size_t offset) const { return begin <= offset && offset < end; }
    std::size_t length() const { return end - begin; }

    friend bool operator==(const Span&, const Span&) = default;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An immutable source text with a line index. A leading UTF-8 byte-order
/// mark is stripped on construction.
class SourceFile {
public:
    SourceFile(std::string path, std::string text);

    const std::string& path() const { return m_path; }
    const std::string& text() const { return m_text; }

    /// Byte offsets of every line start; a trailing newline does not open a
    /// new line.
    std::span<const std::size_t> lineStarts() const { return m_lineStarts; }

    /// Number of lines; zero for empty text.
    std::size_t lineCount() const { return m_text.empty() ? 0 : m_lineStarts.size(); }

    Position positionOf(std::size_t offset) const;
    Span spanOf(std::size_t begin, std::size_t end) const;

    /// Text of a 1-based line without its terminator (LF or CRLF).
    std::string_view lineText(std::size_t line) const;
    std::string_view slice(const Span& span) const;
    std::string_view slice(std::size_t begin, std::size_t end) const;

private:
    std::string m_path;
    std::string m_text;
    std::vector<std::size_t> m_lineStarts;
};

/// Reads a file from disk. Throws IoError when it cannot be read.
SourceFile loadSourceFile(const std::filesystem::path& path);

/// Splits text into lines without terminators, matching SourceFile's line model.
std::vector<std::string> splitLines(std::string_view text);

} // namespace evlint
