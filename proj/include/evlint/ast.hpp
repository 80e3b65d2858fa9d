#pragma once

#include <evlint/source.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace evlint {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

// ---------------------------------------------------------------------------
// Expressions

enum class LiteralKind { Number, String, Bool, HexAddress };

struct IdentifierExpr {
    std::string name;
};

struct MemberAccessExpr {
    ExprPtr base;
    std::string member;
};

struct IndexAccessExpr {
    ExprPtr base;
    ExprPtr index; ///< null for `T[]` in type position, e.g. `new uint[](n)`
};

struct CallExpr {
    ExprPtr callee;
    std::vector<ExprPtr> args;
    /// `{value: v, gas: g}` call options, values only.
    std::vector<ExprPtr> options;
};

struct LiteralExpr {
    LiteralKind kind;
    std::string text;
};

struct BinaryExpr {
    std::string op;
    ExprPtr lhs;
    ExprPtr rhs;
};

/// Prefix and postfix unary operators; `new T` is a prefix `new` over an
/// identifier naming the type.
struct UnaryExpr {
    std::string op;
    ExprPtr operand;
    bool postfix = false;
};

struct AssignmentExpr {
    ExprPtr lhs;
    ExprPtr rhs;
    std::string op;
};

struct ConditionalExpr {
    ExprPtr cond;
    ExprPtr whenTrue;
    ExprPtr whenFalse;
};

/// `(a, b)` or `[a, b]`. Elements may be null for omitted tuple slots.
struct TupleExpr {
    std::vector<ExprPtr> elements;
    bool isArray = false;
};

struct Expr {
    Span span;
    std::variant<IdentifierExpr, MemberAccessExpr, IndexAccessExpr, CallExpr, LiteralExpr, BinaryExpr,
                 UnaryExpr, AssignmentExpr, ConditionalExpr, TupleExpr>
        node;

    template <class T> const T* as() const { return std::get_if<T>(&node); }
};

// ---------------------------------------------------------------------------
// Statements and declarations

enum class DataLocation { Default, Memory, Storage, Calldata };

std::string_view toString(DataLocation loc);

struct VarDeclaration {
    std::string name;
    std::string typeName;
    DataLocation location = DataLocation::Default;
    Span span;
};

struct BlockStmt {
    std::vector<StmtPtr> stmts;
    bool unchecked = false;
};

struct IfStmt {
    ExprPtr cond;
    StmtPtr thenBranch;
    StmtPtr elseBranch;
};

struct ForStmt {
    StmtPtr init;
    ExprPtr cond;
    ExprPtr post;
    StmtPtr body;
};

struct WhileStmt {
    ExprPtr cond;
    StmtPtr body;
    bool doWhile = false;
};

struct EmitStmt {
    std::string eventName;
    std::vector<ExprPtr> args;
    Span nameSpan;
};

/// A single declaration, or a tuple declaration `(uint a, , bool b) = f();`
/// whose omitted slots are empty optionals.
struct LocalVarDeclStmt {
    std::vector<std::optional<VarDeclaration>> vars;
    ExprPtr init;

    bool isTuple() const { return vars.size() != 1; }
};

struct ExprStmt {
    ExprPtr expr;
};

struct ReturnStmt {
    ExprPtr expr;
};

struct TryClause {
    std::string errorName; ///< empty for `returns` and bare `catch`
    std::vector<VarDeclaration> params;
    StmtPtr body;
    bool isReturns = false;
};

struct TryStmt {
    ExprPtr call;
    std::vector<TryClause> clauses;
};

/// Recovery node: a construct outside the supported subset (or a statement
/// that failed to parse), recorded verbatim.
struct UnparsedStmt {
    std::string rawText;
};

struct Stmt {
    Span span;
    std::variant<BlockStmt, IfStmt, ForStmt, WhileStmt, EmitStmt, LocalVarDeclStmt, ExprStmt, ReturnStmt,
                 TryStmt, UnparsedStmt>
        node;

    template <class T> const T* as() const { return std::get_if<T>(&node); }
};

struct Param {
    std::string name;
    std::string typeName;
    DataLocation dataLocation = DataLocation::Default;
    Span span;
};

struct EventParam {
    std::optional<std::string> name;
    std::string typeName;
    bool indexed = false;
    Span span;
};

struct EventDef {
    std::string name;
    std::vector<EventParam> params;
    bool anonymous = false;
    Span span;
};

struct StateVarDecl {
    std::string name;
    std::string typeName;
    std::string visibility;
    bool constant = false;
    bool immutable = false;
    ExprPtr init;
    Span span;
};

enum class FunctionKind { Function, Constructor, Fallback, Receive, Modifier };

struct FunctionDef {
    FunctionKind kind = FunctionKind::Function;
    std::string name;
    std::vector<Param> params;
    std::vector<Param> returns;
    std::string visibility;
    std::string mutability;
    std::vector<std::string> modifiers;
    StmtPtr body; ///< a BlockStmt, or null for declarations without body
    Span span;
};

struct StructDef {
    std::string name;
    std::vector<Param> fields;
    Span span;
};

struct EnumDef {
    std::string name;
    std::vector<std::string> members;
    Span span;
};

enum class ContractKind { Contract, Interface, Library, Abstract };

std::string_view toString(ContractKind kind);

struct ContractDef {
    std::string name;
    ContractKind kind = ContractKind::Contract;
    std::vector<std::string> bases;
    std::vector<StateVarDecl> stateVars;
    std::vector<EventDef> events;
    std::vector<FunctionDef> functions;
    std::vector<StructDef> structs;
    std::vector<EnumDef> enums;
    Span span;
};

struct PragmaDirective {
    std::string text;
    Span span;
};

struct ImportDirective {
    Span span;
};

enum class ParseSeverity { Error, Warning };

struct ParseError {
    ParseSeverity severity = ParseSeverity::Error;
    std::string message;
    Span span;
};

struct SourceUnit {
    std::vector<PragmaDirective> pragmas;
    std::vector<ImportDirective> imports;
    std::vector<ContractDef> contracts;
    /// File-level definitions (free functions, structs, enums, events).
    std::vector<FunctionDef> freeFunctions;
    std::vector<StructDef> structs;
    std::vector<EnumDef> enums;
    std::vector<EventDef> events;
    std::vector<ParseError> parseErrors;

    bool hasFatalErrors() const;
};

// ---------------------------------------------------------------------------
// Traversal helpers

/// Pre-order walk over a statement tree.
void forEachStmt(const Stmt& root, const std::function<void(const Stmt&)>& visit);

/// Pre-order walk over an expression tree (null-safe).
void forEachExpr(const Expr* root, const std::function<void(const Expr&)>& visit);

/// Visits every expression directly owned by a statement (not by nested
/// statements).
void forEachOwnExpr(const Stmt& stmt, const std::function<void(const Expr&)>& visit);

/// Every function-like body in the unit: contract functions, modifiers,
/// constructors and free functions.
void forEachFunction(const SourceUnit& unit, const std::function<void(const FunctionDef&, const ContractDef*)>& visit);

/// All emit statements in a function body, in source order.
std::vector<const Stmt*> collectEmits(const FunctionDef& fn);

std::size_t countEmitStatements(const SourceUnit& unit);

/// Span-free structural rendering used for equality comparisons and debugging.
std::string dump(const Expr& expr);
std::string dump(const Stmt& stmt);

/// Root identifier expression of an lvalue chain (`a` for `a.b[i].c`), or null.
const Expr* rootIdentifier(const Expr& expr);

} // namespace evlint
