#include <evlint/metrics.hpp>

#include <evlint/loc.hpp>
#include <evlint/parser.hpp>
#include <evlint/regex_emit.hpp>

#include <algorithm>

namespace evlint {

std::string_view toString(CountMethod method)
{
    return method == CountMethod::Ast ? "ast" : "regex";
}

EmitCount countEmits(const SourceFile& file, const SourceUnit& unit)
{
    if (!unit.hasFatalErrors())
        return {countEmitStatements(unit), CountMethod::Ast};
    auto matches = extractEmitsRegex(file);
    auto n = std::count_if(matches.begin(), matches.end(), [](const RegexEmitMatch& m) { return !m.inCommentOrString; });
    return {static_cast<std::size_t>(n), CountMethod::Regex};
}

FileMetrics computeFileMetrics(const SourceFile& file)
{
    FileMetrics row;
    row.path = file.path();
    row.codeLoc = countLoc(file).codeLines;
    auto counted = countEmits(file, parseFile(file));
    row.emitCount = counted.count;
    row.method = counted.method;
    row.emitPerLoc = row.codeLoc ? static_cast<double>(row.emitCount) / static_cast<double>(row.codeLoc) : 0.0;
    return row;
}

ProjectMetrics aggregateMetrics(std::vector<FileMetrics> rows)
{
    ProjectMetrics m;
    m.fileCount = rows.size();
    for (const auto& r : rows) {
        m.totalCodeLoc += r.codeLoc;
        m.totalEmitCount += r.emitCount;
    }
    m.emitPerLoc = m.totalCodeLoc ? static_cast<double>(m.totalEmitCount) / static_cast<double>(m.totalCodeLoc) : 0.0;
    m.perFile = std::move(rows);
    return m;
}

ProjectMetrics computeMetrics(std::span<const SourceFile> files, Execution exec)
{
    std::vector<FileMetrics> rows(files.size());
    forEachIndex(files.size(), exec, [&](std::size_t i) { rows[i] = computeFileMetrics(files[i]); });
    return aggregateMetrics(std::move(rows));
}

} // namespace evlint
