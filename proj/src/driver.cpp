#include <evlint/driver.hpp>

#include <evlint/loc.hpp>
#include <evlint/metrics.hpp>
#include <evlint/parser.hpp>
#include <evlint/symbols.hpp>

#include <algorithm>
#include <system_error>

namespace evlint {

namespace fs = std::filesystem;

LoadedSources loadSources(const std::vector<fs::path>& inputs)
{
    LoadedSources out;
    std::vector<fs::path> paths;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<fs::path> found;
            fs::recursive_directory_iterator it(input, fs::directory_options::skip_permission_denied, ec);
            if (ec) {
                out.errors.push_back({input.string(), ec.message()});
                continue;
            }
            for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (ec)
                    break;
                if (it->is_regular_file(ec) && it->path().extension() == ".sol")
                    found.push_back(it->path());
            }
            if (ec)
                out.errors.push_back({input.string(), ec.message()});
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else if (fs::exists(input, ec)) {
            paths.push_back(input);
        } else {
            out.errors.push_back({input.string(), "no such file or directory"});
        }
    }
    for (const auto& p : paths) {
        try {
            out.files.push_back(loadSourceFile(p));
        } catch (const IoError& e) {
            out.errors.push_back({p.string(), e.what()});
        }
    }
    return out;
}

FileReport lintFile(const SourceFile& file, const CheckConfig& cfg)
{
    FileReport report;
    report.path = file.path();
    auto unit = parseFile(file);
    report.parseErrors = unit.parseErrors.size();
    report.fatalParse = unit.hasFatalErrors();
    auto tree = buildSymbols(unit);
    auto emits = countEmits(file, unit);
    report.diagnostics = runChecks(file, unit, tree, countLoc(file), emits.count, cfg);
    return report;
}

LintReport lintFiles(std::span<const SourceFile> files, const CheckConfig& cfg, Execution exec)
{
    cfg.validate();
    LintReport report;
    report.files.resize(files.size());
    forEachIndex(files.size(), exec, [&](std::size_t i) { report.files[i] = lintFile(files[i], cfg); });
    for (const auto& f : report.files)
        report.diagnostics.insert(report.diagnostics.end(), f.diagnostics.begin(), f.diagnostics.end());
    sortDiagnostics(report.diagnostics);
    return report;
}

} // namespace evlint
