#pragma once

#include <evlint/checks.hpp>

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evlint::cli {

enum class Command { Lint, Metrics, Diff };
enum class Format { Text, Json };

struct CheckOverrides {
    std::optional<double> overuseThreshold;
    /// Replaces the enabled set when present.
    std::optional<std::vector<std::string>> enable;
    std::vector<std::string> disable;
    bool debugEventFormB = false;
};

struct RunConfig {
    Command command = Command::Lint;
    /// Defaults to the current directory for lint and metrics.
    std::vector<std::string> inputPaths;
    Format format = Format::Text;
    std::optional<std::string> configFile;
    CheckOverrides overrides;
    std::optional<std::string> manifest;
    bool wholeFileKill = false;
};

struct Streams {
    std::ostream& out;
    std::ostream& err;
    bool color = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Defaults, then the JSON config file, then command-line overrides.
/// Throws UsageError for unknown check ids, bad values or an unreadable file.
CheckConfig resolveCheckConfig(const RunConfig& cfg);

/// 0 without findings, 1 with findings, 2 on usage errors or when no file
/// could be analyzed.
int runLint(const RunConfig& cfg, Streams& io);

/// 0 on success, 2 when every input failed to load.
int runMetrics(const RunConfig& cfg, Streams& io);

/// 0 on success, 2 when the manifest cannot be read or parsed.
int runDiff(const RunConfig& cfg, Streams& io);

/// Parses the command line and dispatches. argv[0] is the program name.
int run(const std::vector<std::string>& args, Streams& io);

} // namespace evlint::cli
