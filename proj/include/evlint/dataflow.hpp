#pragma once

#include <evlint/ast.hpp>
#include <evlint/symbols.hpp>

#include <vector>

namespace evlint {

struct EqualityFact {
    const Symbol* storageSym = nullptr;
    const Symbol* memorySym = nullptr;
    Span establishedAt;
};

enum class KillKind { Reassigned, PassedAsCallArgument, CompoundAssigned, IncDec };

std::string_view toString(KillKind kind);

struct KillEvent {
    KillKind kind;
    const Symbol* victim = nullptr;
    Span span;
};

/// Everything a statement (including nested statements) may invalidate.
struct StmtEffects {
    std::vector<KillEvent> kills;
    /// Some call or write may have modified arbitrary storage.
    bool clobbersStorage = false;

    bool killsSymbol(const Symbol* sym) const;
};

StmtEffects effectsOf(const Stmt& stmt, const ScopeTree& tree);

/// Storage/memory value equalities that hold on every path reaching `emit`.
std::vector<EqualityFact> equalitiesAt(const Stmt& emit, const FunctionDef& fn, const ScopeTree& tree);

/// Every pair of variables (any location class) proven equal just before
/// `emit`, each pair ordered by symbol id.
std::vector<std::pair<const Symbol*, const Symbol*>> variableEqualitiesAt(const Stmt& emit, const FunctionDef& fn,
                                                                          const ScopeTree& tree);

/// True for callees that cannot write storage: `require`, `keccak256`,
/// `abi.encode`, type conversions and similar.
bool isPureBuiltinCallee(const Expr& callee, const ScopeTree& tree);

} // namespace evlint
