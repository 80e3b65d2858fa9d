#pragma once

#include <evlint/ast.hpp>
#include <evlint/loc.hpp>
#include <evlint/symbols.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace evlint {

enum class CheckId { GasStorageParam, EventOveruse, EmitBeforeOp, RedundantEvent, DebugEvent };
enum class Severity { Error, Warning, Info, Hint };

/// GAS_STORAGE_PARAM, EVENT_OVERUSE, ...
std::string_view toString(CheckId id);
std::string_view toString(Severity severity);
std::optional<CheckId> parseCheckId(std::string_view text);

inline const std::set<CheckId>& allChecks()
{
    static const std::set<CheckId> all{CheckId::GasStorageParam, CheckId::EventOveruse, CheckId::EmitBeforeOp,
                                       CheckId::RedundantEvent, CheckId::DebugEvent};
    return all;
}

struct Suggestion {
    Span replaceSpan;
    std::string replacementText;
};

struct Diagnostic {
    CheckId checkId;
    Severity severity;
    std::string file;
    Span span;
    std::string message;
    std::optional<Suggestion> suggestion;
};

struct CheckConfig {
    double overuseThreshold = 0.1;
    std::set<CheckId> enabled = allChecks();
    /// Flag emits mixing variables with a string literal.
    bool debugEventFormB = false;

    /// Throws std::invalid_argument unless 0 < overuseThreshold <= 1.
    void validate() const;
    bool isEnabled(CheckId id) const { return enabled.count(id) != 0; }
};

std::vector<Diagnostic> checkGasStorageParam(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                             const CheckConfig& cfg);

std::vector<Diagnostic> checkOveruse(const SourceFile& file, const LocStats& loc, std::size_t emitCount,
                                     const CheckConfig& cfg);

std::vector<Diagnostic> checkEmitBeforeOp(const SourceFile& file, const FunctionDef& fn, const ScopeTree& tree);

std::vector<Diagnostic> checkRedundantEvent(const SourceFile& file, const FunctionDef& fn, const ScopeTree& tree);

std::vector<Diagnostic> checkDebugEvent(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                        const CheckConfig& cfg);

/// Every enabled check over one file.
std::vector<Diagnostic> runChecks(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                  const LocStats& loc, std::size_t emitCount, const CheckConfig& cfg);

/// Orders by (file, line, column, check id, message).
void sortDiagnostics(std::vector<Diagnostic>& diags);

} // namespace evlint
