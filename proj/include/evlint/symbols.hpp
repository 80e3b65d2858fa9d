#pragma once

#include <evlint/ast.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evlint {

enum class SymbolKind { StateVar, LocalVar, Param, EventName, FunctionName, ContractName, Builtin };
enum class LocationClass { StorageClass, MemoryClass, NotApplicable };
enum class ScopeKind { File, Contract, Function, Block };

std::string_view toString(SymbolKind kind);
std::string_view toString(LocationClass cls);

using ScopeId = std::uint32_t;
using SymbolId = std::uint32_t;

struct Symbol {
    SymbolId id = 0;
    std::string name;
    SymbolKind kind = SymbolKind::Builtin;
    std::string declaredType;
    /// Storage (persistent, read via SLOAD) versus everything else. Value-typed
    /// parameters and locals live on the stack but are classed MemoryClass.
    LocationClass locationClass = LocationClass::NotApplicable;
    /// Declared location with Default resolved for reference types (calldata
    /// for external function parameters, memory otherwise).
    DataLocation dataLocation = DataLocation::Default;
    Span declSpan;
    ScopeId scopeId = 0;
    /// Byte offset from which a local becomes visible (end of its declaration).
    std::size_t visibleFrom = 0;
    bool valueType = false;
    /// `constant` or `immutable` state variable: no storage read at use sites.
    bool constant = false;
    /// Name of the parent contract a state variable was imported from.
    std::optional<std::string> inheritedFrom;

    bool isVariable() const { return kind == SymbolKind::StateVar || kind == SymbolKind::LocalVar || kind == SymbolKind::Param; }
};

struct Scope {
    ScopeId id = 0;
    std::optional<ScopeId> parent;
    ScopeKind kind = ScopeKind::File;
    Span span;
    std::vector<SymbolId> symbols;
    std::vector<ScopeId> children;
};

struct SemanticWarning {
    std::string message;
    Span span;
};

struct UnresolvedName {
    std::string name;
    Span span;
};

/// Lexical scopes of one source unit. Immutable after construction.
class ScopeTree {
public:
    const std::vector<Scope>& scopes() const { return m_scopes; }
    const std::vector<Symbol>& symbols() const { return m_symbols; }
    const Scope& scope(ScopeId id) const { return m_scopes.at(id); }
    const Symbol& symbol(SymbolId id) const { return m_symbols.at(id); }

    /// DuplicateDeclaration and similar findings.
    const std::vector<SemanticWarning>& warnings() const { return m_warnings; }

    /// Identifier occurrences inside emit arguments that resolve to nothing.
    const std::vector<UnresolvedName>& unresolvedInEmits() const { return m_unresolved; }

    ScopeId innermostScopeAt(const Span& at) const;

    const Symbol* builtin(std::string_view name) const;

    /// The variable declared by the declaration whose span starts at `declSpan`.
    const Symbol* declaredAt(const Span& declSpan) const;

private:
    friend class SymbolTableBuilder;

    std::vector<Scope> m_scopes;
    std::vector<Symbol> m_symbols;
    std::vector<SymbolId> m_builtins;
    std::unordered_map<std::size_t, SymbolId> m_byDeclBegin;
    std::vector<SemanticWarning> m_warnings;
    std::vector<UnresolvedName> m_unresolved;
};

ScopeTree buildSymbols(const SourceUnit& unit);

/// Innermost visible declaration of `name` at `at`, falling back to builtin
/// pseudo-symbols (`msg`, `block`, `tx`, `this`, `address`, ...). Returns null
/// when the name is unresolved.
const Symbol* resolve(std::string_view name, const Span& at, const ScopeTree& tree);

/// Resolves an identifier expression at its own span.
const Symbol* resolve(const Expr& identifier, const ScopeTree& tree);

/// MemoryClass parameters and locals visible at `at`: innermost scope first,
/// declaration order within a scope, shadowed names excluded.
std::vector<const Symbol*> inScopeMemorySymbols(const Span& at, const ScopeTree& tree);

/// Solidity value types: integers, bool, address, fixed-size bytes, enums,
/// contract types and function types.
bool isValueTypeName(std::string_view typeName, const std::vector<std::string>& enumNames,
                     const std::vector<std::string>& contractNames);

} // namespace evlint
