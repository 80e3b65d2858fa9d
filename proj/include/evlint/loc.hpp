#pragma once

#include <evlint/source.hpp>

#include <cstddef>
#include <vector>

namespace evlint {

enum class LineKind { Code, Comment, Blank };

/// Line counts for a file. A line holding code and a trailing comment counts
/// as code; whitespace-only lines inside an open block comment count as
/// comment lines.
struct LocStats {
    std::size_t totalLines = 0;
    std::size_t codeLines = 0;
    std::size_t commentLines = 0;
    std::size_t blankLines = 0;

    friend bool operator==(const LocStats&, const LocStats&) = default;
};

/// Per-line classification, index 0 is line 1.
std::vector<LineKind> classifyLines(const SourceFile& file);

LocStats countLoc(const SourceFile& file);

LocStats tally(const std::vector<LineKind>& kinds);

} // namespace evlint
