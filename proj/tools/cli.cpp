#include "cli.hpp"

#include <evlint/driver.hpp>
#include <evlint/evolution.hpp>
#include <evlint/manifest.hpp>
#include <evlint/metrics.hpp>
#include <evlint/report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace evlint::cli {

namespace {

std::vector<std::filesystem::path> inputsOf(const RunConfig& cfg)
{
    std::vector<std::filesystem::path> out;
    for (const auto& p : cfg.inputPaths)
        out.emplace_back(p);
    if (out.empty())
        out.emplace_back(".");
    return out;
}

CheckId checkIdOrThrow(const std::string& text)
{
    auto id = parseCheckId(text);
    if (!id)
        throw UsageError("unknown check id '" + text + "'");
    return *id;
}

std::vector<std::string> splitList(const std::vector<std::string>& items)
{
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty())
                out.push_back(part);
    }
    return out;
}

void applyConfigFile(const std::string& path, CheckConfig& cfg)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read config file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw UsageError("config file " + path + " must contain a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "overuseThreshold") {
                cfg.overuseThreshold = value.get<double>();
            } else if (key == "enabled") {
                cfg.enabled.clear();
                for (const auto& id : value.get<std::vector<std::string>>())
                    cfg.enabled.insert(checkIdOrThrow(id));
            } else if (key == "disabled") {
                for (const auto& id : value.get<std::vector<std::string>>())
                    cfg.enabled.erase(checkIdOrThrow(id));
            } else if (key == "debugEventFormB") {
                cfg.debugEventFormB = value.get<bool>();
            } else {
                throw UsageError("config file " + path + ": unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::type_error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
}

void reportInputErrors(const std::vector<InputError>& errors, Streams& io)
{
    for (const auto& e : errors)
        io.err << "error: " << e.path << ": " << e.message << '\n';
}

std::string plural(std::size_t n, const char* one, const char* many)
{
    return std::to_string(n) + " " + (n == 1 ? one : many);
}

} // namespace

CheckConfig resolveCheckConfig(const RunConfig& run)
{
    CheckConfig cfg;
    if (run.configFile)
        applyConfigFile(*run.configFile, cfg);
    const auto& o = run.overrides;
    if (o.overuseThreshold)
        cfg.overuseThreshold = *o.overuseThreshold;
    if (o.enable) {
        cfg.enabled.clear();
        for (const auto& id : *o.enable)
            cfg.enabled.insert(checkIdOrThrow(id));
    }
    for (const auto& id : o.disable)
        cfg.enabled.erase(checkIdOrThrow(id));
    if (o.debugEventFormB)
        cfg.debugEventFormB = true;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int runLint(const RunConfig& run, Streams& io)
{
    CheckConfig cfg;
    try {
        cfg = resolveCheckConfig(run);
    } catch (const UsageError& e) {
        io.err << "error: " << e.what() << '\n';
        return 2;
    }
    auto sources = loadSources(inputsOf(run));
    reportInputErrors(sources.errors, io);
    auto report = lintFiles(sources.files, cfg);
    for (const auto& f : report.files)
        if (f.parseErrors)
            io.err << "warning: " << f.path << ": " << plural(f.parseErrors, "parse error", "parse errors")
                   << "; checks ran on the recovered parts\n";

    std::string summary = plural(sources.files.size(), "file analyzed", "files analyzed") + ", " +
                          plural(report.diagnostics.size(), "finding", "findings");
    if (!sources.errors.empty())
        summary += ", " + plural(sources.errors.size(), "error", "errors");
    if (run.format == Format::Json) {
        renderDiagnosticsJson(io.out, report.diagnostics);
        io.err << summary << '\n';
    } else {
        renderDiagnosticsText(io.out, report.diagnostics, TextStyle{io.color});
        io.out << summary << '\n';
    }
    if (sources.files.empty())
        return 2;
    return report.diagnostics.empty() ? 0 : 1;
}

int runMetrics(const RunConfig& run, Streams& io)
{
    auto sources = loadSources(inputsOf(run));
    reportInputErrors(sources.errors, io);
    auto metrics = computeMetrics(sources.files);
    if (run.format == Format::Json)
        renderMetricsJson(io.out, metrics);
    else
        renderMetricsText(io.out, metrics);
    return sources.files.empty() && !sources.errors.empty() ? 2 : 0;
}

int runDiff(const RunConfig& run, Streams& io)
{
    if (!run.manifest) {
        io.err << "error: diff requires --manifest\n";
        return 2;
    }
    Manifest manifest;
    try {
        manifest = loadManifest(*run.manifest);
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return 2;
    }
    IndependenceOptions opts;
    opts.wholeFileKill = run.wholeFileKill;
    auto reports = analyzeRevisions(manifest.revisions, opts);
    if (run.format == Format::Json) {
        renderDiffJson(io.out, reports, manifest.errors);
        for (const auto& e : manifest.errors)
            io.err << "error: revision " << e.revisionId << " skipped: " << e.message << '\n';
    } else {
        renderDiffText(io.out, reports, manifest.errors, TextStyle{io.color});
    }
    return 0;
}

int run(const std::vector<std::string>& args, Streams& io)
{
    CLI::App app{"Lints Solidity event logging and measures how it evolves across revisions", "evlint"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "text";
    std::vector<std::string> enable;
    std::vector<std::string> disable;
    const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}};

    auto* lint = app.add_subcommand("lint", "Report event-logging defects");
    lint->add_option("paths", cfg.inputPaths, "Solidity files or directories (default: .)");
    lint->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    lint->add_option("--config", cfg.configFile, "JSON file with check settings");
    lint->add_option("--enable", enable, "Comma-separated check ids to run (replaces the default set)");
    lint->add_option("--disable", disable, "Comma-separated check ids to skip");
    lint->add_option("--overuse-threshold", cfg.overrides.overuseThreshold, "Emits per code line above which a file is flagged");
    lint->add_flag("--debug-form-b", cfg.overrides.debugEventFormB, "Also flag emits of variables plus a string");

    auto* metrics = app.add_subcommand("metrics", "Report emit density per file and project");
    metrics->add_option("paths", cfg.inputPaths, "Solidity files or directories (default: .)");
    metrics->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* diff = app.add_subcommand("diff", "Churn and emit changes for revisions listed in a manifest");
    diff->add_option("--manifest", cfg.manifest, "Revision manifest (JSON)")->required();
    diff->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    diff->add_flag("--whole-file-kill", cfg.wholeFileKill, "Scan whole files, not only changed lines, for kills");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, io.out, io.err);
        return code == 0 ? 0 : 2;
    }

    cfg.format = formats.at(format);
    if (!enable.empty())
        cfg.overrides.enable = splitList(enable);
    cfg.overrides.disable = splitList(disable);

    if (lint->parsed()) {
        cfg.command = Command::Lint;
        return runLint(cfg, io);
    }
    if (metrics->parsed()) {
        cfg.command = Command::Metrics;
        return runMetrics(cfg, io);
    }
    cfg.command = Command::Diff;
    return runDiff(cfg, io);
}

} // namespace evlint::cli
