#pragma once

#include <evlint/ast.hpp>
#include <evlint/parallel.hpp>
#include <evlint/source.hpp>

#include <span>
#include <string>
#include <vector>

namespace evlint {

/// How a file's emits were counted: parsed statements, or the textual
/// pattern when the file has fatal parse errors.
enum class CountMethod { Ast, Regex };

std::string_view toString(CountMethod method);

struct EmitCount {
    std::size_t count = 0;
    CountMethod method = CountMethod::Ast;
};

/// AST emit statements, or regex matches outside comments and strings when
/// the unit has fatal errors.
EmitCount countEmits(const SourceFile& file, const SourceUnit& unit);

struct FileMetrics {
    std::string path;
    std::size_t codeLoc = 0;
    std::size_t emitCount = 0;
    double emitPerLoc = 0.0;
    CountMethod method = CountMethod::Ast;
};

struct ProjectMetrics {
    std::size_t fileCount = 0;
    std::size_t totalCodeLoc = 0;
    std::size_t totalEmitCount = 0;
    double emitPerLoc = 0.0;
    std::vector<FileMetrics> perFile;
};

FileMetrics computeFileMetrics(const SourceFile& file);

/// Sums per-file rows; rows keep their input order.
ProjectMetrics aggregateMetrics(std::vector<FileMetrics> rows);

ProjectMetrics computeMetrics(std::span<const SourceFile> files, Execution exec = Execution::Parallel);

} // namespace evlint
