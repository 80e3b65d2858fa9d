#pragma once

#include <evlint/line_diff.hpp>
#include <evlint/parallel.hpp>
#include <evlint/regex_emit.hpp>
#include <evlint/source.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evlint {

struct FilePair {
    std::string path;
    std::optional<SourceFile> before;
    std::optional<SourceFile> after;
};

struct Revision {
    std::string id;
    std::optional<std::string> message;
    std::vector<FilePair> filePairs;

    /// Throws std::invalid_argument when a pair has neither side.
    void validate() const;
};

struct ChurnReport {
    std::size_t churnedLoc = 0;
    std::size_t totalLoc = 0;
    double locChurnRate = 0.0;
    std::size_t churnedEmits = 0;
    std::size_t totalEmits = 0;
    double emitChurnRate = 0.0;
};

enum class ChangeCategory { ParameterChange, Addition, Deletion, Move, Replacement, Compound };
enum class Independence { AbsoluteIndependent, HeuristicIndependent, Dependent };

std::string_view toString(ChangeCategory category);
std::string_view toString(Independence independence);

struct EventUseChange {
    std::string path;
    ChangeCategory category = ChangeCategory::Addition;
    std::optional<RegexEmitMatch> beforeEmit;
    std::optional<RegexEmitMatch> afterEmit;
    /// Argument identifiers and literals that differ between the two sides.
    std::vector<std::string> changedArgTokens;
    Independence independence = Independence::Dependent;
};

struct IndependenceOptions {
    /// Scan every line of both sides for kills instead of only changed lines.
    bool wholeFileKill = false;
};

ChurnReport churn(const Revision& rev);

/// Classified emit changes in file-pair order, then by source position.
/// Independence is left at Dependent; see classifyIndependence.
std::vector<EventUseChange> pairEmitChanges(const Revision& rev);

Independence classifyIndependence(const Revision& rev, const EventUseChange& change,
                                  const IndependenceOptions& opts = {});

/// Only checks whether any changed argument identifier is killed in the revision.
bool passesKillTest(const Revision& rev, const EventUseChange& change, const IndependenceOptions& opts = {});

/// True when every added or deleted line is blank, a comment, or part of an emit.
bool onlyEmitLinesChanged(const Revision& rev);

struct RevisionReport {
    std::string id;
    std::optional<std::string> message;
    ChurnReport churn;
    std::vector<EventUseChange> changes;
};

RevisionReport analyzeRevision(const Revision& rev, const IndependenceOptions& opts = {});

/// Reports come back in input order whichever execution is chosen.
std::vector<RevisionReport> analyzeRevisions(std::span<const Revision> revs, const IndependenceOptions& opts = {},
                                             Execution exec = Execution::Parallel);

struct EvolutionSummary {
    std::size_t revisions = 0;
    std::size_t changes = 0;
    std::size_t absolute = 0;
    std::size_t heuristic = 0;
    std::size_t dependent = 0;
    /// absolute / changes
    double absoluteFraction = 0.0;
    /// (absolute + heuristic) / changes
    double independentFraction = 0.0;
    std::size_t byCategory[6] = {};
    std::size_t churnedLoc = 0;
    std::size_t totalLoc = 0;
    std::size_t churnedEmits = 0;
    std::size_t totalEmits = 0;
};

EvolutionSummary summarize(std::span<const RevisionReport> reports);

} // namespace evlint
