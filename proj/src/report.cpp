#include <evlint/report.hpp>

#include <json.hpp>

#include <cstdio>

namespace evlint {

namespace {

using nlohmann::ordered_json;

const char* severityColor(Severity s)
{
    switch (s) {
    case Severity::Error: return "\x1b[31m";
    case Severity::Warning: return "\x1b[33m";
    case Severity::Info: return "\x1b[36m";
    case Severity::Hint: return "\x1b[2m";
    }
    return "";
}

std::string styled(const TextStyle& style, const char* code, std::string_view text)
{
    if (!style.color)
        return std::string(text);
    return std::string(code) + std::string(text) + "\x1b[0m";
}

ordered_json emitJson(const std::optional<RegexEmitMatch>& m)
{
    if (!m)
        return nullptr;
    ordered_json j;
    j["event"] = m->eventName;
    j["args"] = m->rawArgs;
    j["line"] = m->span.startLine;
    j["column"] = m->span.startCol;
    return j;
}

ordered_json churnJson(const ChurnReport& c)
{
    ordered_json j;
    j["churnedLoc"] = c.churnedLoc;
    j["totalLoc"] = c.totalLoc;
    j["locChurnRate"] = c.locChurnRate;
    j["churnedEmits"] = c.churnedEmits;
    j["totalEmits"] = c.totalEmits;
    j["emitChurnRate"] = c.emitChurnRate;
    return j;
}

std::string fraction(std::size_t num, std::size_t den)
{
    return std::to_string(num) + "/" + std::to_string(den);
}

double ratio(std::size_t num, std::size_t den)
{
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

std::string_view lineOf(const std::optional<RegexEmitMatch>& a, const std::optional<RegexEmitMatch>& b,
                        std::string& buf)
{
    const auto& m = b ? b : a;
    buf = std::to_string(m->span.startLine);
    return buf;
}

} // namespace

std::string formatRatio(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

void renderDiagnosticsText(std::ostream& os, std::span<const Diagnostic> diags, const TextStyle& style)
{
    for (const auto& d : diags) {
        os << styled(style, "\x1b[1m", d.file + ":" + std::to_string(d.span.startLine) + ":" +
                                           std::to_string(d.span.startCol))
           << ": " << styled(style, severityColor(d.severity), toString(d.severity)) << ' ' << toString(d.checkId)
           << ": " << d.message << '\n';
        if (d.suggestion)
            os << "    suggestion: replace with `" << d.suggestion->replacementText << "`\n";
    }
}

void renderDiagnosticsJson(std::ostream& os, std::span<const Diagnostic> diags)
{
    ordered_json arr = ordered_json::array();
    for (const auto& d : diags) {
        ordered_json j;
        j["file"] = d.file;
        j["line"] = d.span.startLine;
        j["column"] = d.span.startCol;
        j["endLine"] = d.span.endLine;
        j["endColumn"] = d.span.endCol;
        j["checkId"] = toString(d.checkId);
        j["severity"] = toString(d.severity);
        j["message"] = d.message;
        if (d.suggestion) {
            ordered_json s;
            s["line"] = d.suggestion->replaceSpan.startLine;
            s["column"] = d.suggestion->replaceSpan.startCol;
            s["endLine"] = d.suggestion->replaceSpan.endLine;
            s["endColumn"] = d.suggestion->replaceSpan.endCol;
            s["replacement"] = d.suggestion->replacementText;
            j["suggestion"] = s;
        } else {
            j["suggestion"] = nullptr;
        }
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

void renderMetricsText(std::ostream& os, const ProjectMetrics& m)
{
    for (const auto& f : m.perFile)
        os << f.path << ": " << f.codeLoc << " code lines, " << f.emitCount << " emits, emitPerLoc "
           << formatRatio(f.emitPerLoc) << " (" << toString(f.method) << ")\n";
    os << "total: " << m.fileCount << (m.fileCount == 1 ? " file, " : " files, ") << m.totalCodeLoc
       << " code lines, " << m.totalEmitCount << " emits, emitPerLoc " << formatRatio(m.emitPerLoc) << '\n';
}

void renderMetricsJson(std::ostream& os, const ProjectMetrics& m)
{
    ordered_json j;
    j["fileCount"] = m.fileCount;
    j["totalCodeLoc"] = m.totalCodeLoc;
    j["totalEmitCount"] = m.totalEmitCount;
    j["emitPerLoc"] = m.emitPerLoc;
    j["files"] = ordered_json::array();
    for (const auto& f : m.perFile) {
        ordered_json r;
        r["path"] = f.path;
        r["codeLoc"] = f.codeLoc;
        r["emitCount"] = f.emitCount;
        r["emitPerLoc"] = f.emitPerLoc;
        r["method"] = toString(f.method);
        j["files"].push_back(std::move(r));
    }
    os << j.dump(2) << '\n';
}

void renderDiffText(std::ostream& os, std::span<const RevisionReport> reports, std::span<const ManifestError> errors,
                    const TextStyle& style)
{
    for (const auto& r : reports) {
        os << styled(style, "\x1b[1m", "revision " + r.id);
        if (r.message)
            os << ": " << *r.message;
        os << '\n';
        os << "  churn: loc " << fraction(r.churn.churnedLoc, r.churn.totalLoc) << " ("
           << formatRatio(r.churn.locChurnRate) << "), emits " << fraction(r.churn.churnedEmits, r.churn.totalEmits)
           << " (" << formatRatio(r.churn.emitChurnRate) << ")\n";
        for (const auto& c : r.changes) {
            std::string buf;
            os << "  " << c.path << ":" << lineOf(c.beforeEmit, c.afterEmit, buf) << ' ' << toString(c.category)
               << ' ' << toString(c.independence) << ' ' << (c.beforeEmit ? c.beforeEmit->eventName : "-") << " -> "
               << (c.afterEmit ? c.afterEmit->eventName : "-");
            if (!c.changedArgTokens.empty()) {
                os << " [";
                for (std::size_t i = 0; i < c.changedArgTokens.size(); ++i)
                    os << (i ? ", " : "") << c.changedArgTokens[i];
                os << ']';
            }
            os << '\n';
        }
    }
    for (const auto& e : errors)
        os << styled(style, "\x1b[31m", "error") << ": revision " << e.revisionId << " skipped: " << e.message
           << '\n';
    auto s = summarize(reports);
    os << "summary: " << s.revisions << " revisions, " << s.changes << " changes; absolute " << s.absolute << " ("
       << formatRatio(s.absoluteFraction) << "), independent " << s.absolute + s.heuristic << " ("
       << formatRatio(s.independentFraction) << "), dependent " << s.dependent << '\n';
    os << "  categories:";
    for (std::size_t i = 0; i < 6; ++i)
        os << ' ' << toString(static_cast<ChangeCategory>(i)) << ' ' << s.byCategory[i];
    os << '\n';
    os << "  churn: loc " << fraction(s.churnedLoc, s.totalLoc) << " (" << formatRatio(ratio(s.churnedLoc, s.totalLoc))
       << "), emits " << fraction(s.churnedEmits, s.totalEmits) << " ("
       << formatRatio(ratio(s.churnedEmits, s.totalEmits)) << ")\n";
}

void renderDiffJson(std::ostream& os, std::span<const RevisionReport> reports, std::span<const ManifestError> errors)
{
    ordered_json j;
    j["revisions"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json rj;
        rj["id"] = r.id;
        rj["message"] = r.message ? ordered_json(*r.message) : ordered_json(nullptr);
        rj["churn"] = churnJson(r.churn);
        rj["changes"] = ordered_json::array();
        for (const auto& c : r.changes) {
            ordered_json cj;
            cj["path"] = c.path;
            cj["category"] = toString(c.category);
            cj["independence"] = toString(c.independence);
            cj["before"] = emitJson(c.beforeEmit);
            cj["after"] = emitJson(c.afterEmit);
            cj["changedArgTokens"] = c.changedArgTokens;
            rj["changes"].push_back(std::move(cj));
        }
        j["revisions"].push_back(std::move(rj));
    }
    j["errors"] = ordered_json::array();
    for (const auto& e : errors)
        j["errors"].push_back({{"revision", e.revisionId}, {"message", e.message}});
    auto s = summarize(reports);
    ordered_json sj;
    sj["revisions"] = s.revisions;
    sj["changes"] = s.changes;
    sj["absolute"] = s.absolute;
    sj["heuristic"] = s.heuristic;
    sj["dependent"] = s.dependent;
    sj["absoluteFraction"] = s.absoluteFraction;
    sj["independentFraction"] = s.independentFraction;
    ordered_json cats;
    for (std::size_t i = 0; i < 6; ++i)
        cats[std::string(toString(static_cast<ChangeCategory>(i)))] = s.byCategory[i];
    sj["categories"] = cats;
    sj["churnedLoc"] = s.churnedLoc;
    sj["totalLoc"] = s.totalLoc;
    sj["churnedEmits"] = s.churnedEmits;
    sj["totalEmits"] = s.totalEmits;
    j["summary"] = sj;
    os << j.dump(2) << '\n';
}

} // namespace evlint
