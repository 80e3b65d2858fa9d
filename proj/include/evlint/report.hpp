#pragma once

#include <evlint/checks.hpp>
#include <evlint/driver.hpp>
#include <evlint/evolution.hpp>
#include <evlint/manifest.hpp>
#include <evlint/metrics.hpp>

#include <ostream>
#include <span>

namespace evlint {

struct TextStyle {
    bool color = false;
};

/// One line per diagnostic, `path:line:col: severity CHECK_ID: message`,
/// followed by an indented suggestion line when there is one.
void renderDiagnosticsText(std::ostream& os, std::span<const Diagnostic> diags, const TextStyle& style);

/// A JSON array of objects with the fields file, line, column, endLine,
/// endColumn, checkId, severity, message and suggestion (null or
/// {line, column, endLine, endColumn, replacement}), in that order.
void renderDiagnosticsJson(std::ostream& os, std::span<const Diagnostic> diags);

void renderMetricsText(std::ostream& os, const ProjectMetrics& metrics);

/// {fileCount, totalCodeLoc, totalEmitCount, emitPerLoc, files: [...]}
void renderMetricsJson(std::ostream& os, const ProjectMetrics& metrics);

void renderDiffText(std::ostream& os, std::span<const RevisionReport> reports, std::span<const ManifestError> errors,
                    const TextStyle& style);

/// {revisions: [...], errors: [...], summary: {...}}
void renderDiffJson(std::ostream& os, std::span<const RevisionReport> reports, std::span<const ManifestError> errors);

/// "%.3f"
std::string formatRatio(double value);

} // namespace evlint
