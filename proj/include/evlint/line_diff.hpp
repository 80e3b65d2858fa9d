#pragma once

#include <evlint/source.hpp>

#include <optional>
#include <string>
#include <vector>

namespace evlint {

enum class DiffOpKind { Keep, Add, Delete };

struct DiffOp {
    DiffOpKind kind;
    std::optional<std::size_t> beforeLine; ///< 1-based, Keep and Delete
    std::optional<std::size_t> afterLine;  ///< 1-based, Keep and Add
    std::string text;
};

/// A shortest edit script. Within every run of changes the deletions come
/// before the additions, so a Delete followed by an Add reads as a modified line.
struct LineDiff {
    std::vector<DiffOp> ops;
};

/// A maximal run of non-Keep ops, as [begin, end) indices into LineDiff::ops.
struct Hunk {
    std::size_t begin = 0;
    std::size_t end = 0;
};

LineDiff diffLines(const std::vector<std::string>& before, const std::vector<std::string>& after);

/// Either side may be absent (file added or deleted).
LineDiff diffFiles(const SourceFile* before, const SourceFile* after);

std::vector<Hunk> hunks(const LineDiff& diff);

/// Applies the script to `before`, yielding the after lines.
std::vector<std::string> replay(const LineDiff& diff, const std::vector<std::string>& before);

} // namespace evlint
