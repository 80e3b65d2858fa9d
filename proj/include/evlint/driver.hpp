#pragma once

#include <evlint/checks.hpp>
#include <evlint/parallel.hpp>
#include <evlint/source.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace evlint {

struct InputError {
    std::string path;
    std::string message;
};

struct LoadedSources {
    std::vector<SourceFile> files;
    std::vector<InputError> errors;
};

/// Expands directories recursively to their .sol files (sorted) and reads
/// them. Explicitly named files are taken as given. Missing paths and
/// unreadable files become error records.
LoadedSources loadSources(const std::vector<std::filesystem::path>& inputs);

struct FileReport {
    std::string path;
    std::vector<Diagnostic> diagnostics;
    std::size_t parseErrors = 0;
    bool fatalParse = false;
};

struct LintReport {
    std::vector<FileReport> files;
    /// Every diagnostic of every file, sorted.
    std::vector<Diagnostic> diagnostics;
};

FileReport lintFile(const SourceFile& file, const CheckConfig& cfg);

/// Validates the config, then lints each file independently.
LintReport lintFiles(std::span<const SourceFile> files, const CheckConfig& cfg,
                     Execution exec = Execution::Parallel);

} // namespace evlint
