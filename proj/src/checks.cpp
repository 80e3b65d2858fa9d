#include <evlint/checks.hpp>

#include <evlint/dataflow.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace evlint {

std::string_view toString(CheckId id)
{
    switch (id) {
    case CheckId::GasStorageParam: return "GAS_STORAGE_PARAM";
    case CheckId::EventOveruse: return "EVENT_OVERUSE";
    case CheckId::EmitBeforeOp: return "EMIT_BEFORE_OP";
    case CheckId::RedundantEvent: return "REDUNDANT_EVENT";
    case CheckId::DebugEvent: return "DEBUG_EVENT";
    }
    return "?";
}

std::string_view toString(Severity severity)
{
    switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    case Severity::Hint: return "hint";
    }
    return "?";
}

std::optional<CheckId> parseCheckId(std::string_view text)
{
    for (CheckId id : allChecks())
        if (toString(id) == text)
            return id;
    return std::nullopt;
}

void CheckConfig::validate() const
{
    if (!(overuseThreshold > 0.0 && overuseThreshold <= 1.0))
        throw std::invalid_argument("overuse threshold must be in (0, 1]");
}

namespace {

const Symbol* variableOf(const Expr& e, const ScopeTree& tree)
{
    if (!e.as<IdentifierExpr>())
        return nullptr;
    const Symbol* sym = resolve(e, tree);
    return sym && sym->isVariable() ? sym : nullptr;
}

/// Variable symbols referenced anywhere in the expressions.
std::set<const Symbol*> variablesIn(const std::vector<ExprPtr>& exprs, const ScopeTree& tree)
{
    std::set<const Symbol*> out;
    for (const auto& e : exprs)
        forEachExpr(e.get(), [&](const Expr& x) {
            if (const Symbol* s = variableOf(x, tree))
                out.insert(s);
        });
    return out;
}

std::string stripWhitespace(std::string_view text)
{
    std::string out;
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r')
            out.push_back(c);
    return out;
}

Diagnostic make(CheckId id, Severity sev, const SourceFile& file, const Span& span, std::string message)
{
    return Diagnostic{id, sev, file.path(), span, std::move(message), std::nullopt};
}

/// Calls each block's direct statement list in a function body.
template <class F> void forEachBlock(const FunctionDef& fn, F&& visit)
{
    if (!fn.body)
        return;
    forEachStmt(*fn.body, [&](const Stmt& s) {
        if (auto b = s.as<BlockStmt>())
            visit(b->stmts);
    });
}

bool isStringLiteral(const Expr& e)
{
    auto lit = e.as<LiteralExpr>();
    return lit && lit->kind == LiteralKind::String;
}

std::string lineList(const std::vector<const Stmt*>& emits)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < emits.size(); ++i)
        os << (i ? ", " : "") << emits[i]->span.startLine;
    return os.str();
}

// --- EMIT_BEFORE_OP ------------------------------------------------------

constexpr std::array kTransferLike = {"transfer", "send", "call", "delegatecall"};

bool sharesSymbol(const Expr* e, const std::set<const Symbol*>& syms, const ScopeTree& tree)
{
    bool hit = false;
    forEachExpr(e, [&](const Expr& x) {
        if (const Symbol* s = variableOf(x, tree); s && syms.count(s))
            hit = true;
    });
    return hit;
}

/// Variables written by a statement that is an assignment or ++/--.
std::set<const Symbol*> assignedBy(const Stmt& s, const ScopeTree& tree)
{
    std::set<const Symbol*> out;
    auto es = s.as<ExprStmt>();
    if (!es)
        return out;
    const Expr& e = *es->expr;
    auto addTarget = [&](const Expr& lhs, auto& self) -> void {
        if (auto t = lhs.as<TupleExpr>()) {
            for (const auto& el : t->elements)
                if (el)
                    self(*el, self);
            return;
        }
        if (const Expr* root = rootIdentifier(lhs))
            if (const Symbol* sym = variableOf(*root, tree))
                out.insert(sym);
    };
    if (auto a = e.as<AssignmentExpr>())
        addTarget(*a->lhs, addTarget);
    else if (auto u = e.as<UnaryExpr>(); u && (u->op == "++" || u->op == "--" || u->op == "delete"))
        addTarget(*u->operand, addTarget);
    return out;
}

/// A transfer-like call in the statement's own expressions that involves one of `syms`.
const Expr* transferLikeCall(const Stmt& s, const std::set<const Symbol*>& syms, const ScopeTree& tree)
{
    const Expr* found = nullptr;
    forEachOwnExpr(s, [&](const Expr& root) {
        forEachExpr(&root, [&](const Expr& x) {
            auto call = x.as<CallExpr>();
            if (found || !call)
                return;
            auto member = call->callee->as<MemberAccessExpr>();
            if (!member
                || std::find(kTransferLike.begin(), kTransferLike.end(), member->member) == kTransferLike.end())
                return;
            bool shared = sharesSymbol(member->base.get(), syms, tree);
            for (const auto& a : call->args)
                shared = shared || sharesSymbol(a.get(), syms, tree);
            for (const auto& o : call->options)
                shared = shared || sharesSymbol(o.get(), syms, tree);
            if (shared)
                found = &x;
        });
    });
    return found;
}

// --- REDUNDANT_EVENT -----------------------------------------------------

using ArgKeys = std::vector<std::string>;

ArgKeys argKeys(const EmitStmt& em, const SourceFile& file, const ScopeTree& tree)
{
    ArgKeys keys;
    for (const auto& a : em.args) {
        if (const Symbol* s = variableOf(*a, tree))
            keys.push_back("#" + std::to_string(s->id));
        else
            keys.push_back(stripWhitespace(file.slice(a->span)));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

bool multisetIncludes(const ArgKeys& big, const ArgKeys& small)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

std::vector<Diagnostic> checkGasStorageParam(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                             const CheckConfig&)
{
    std::vector<Diagnostic> out;
    forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef*) {
        for (const Stmt* s : collectEmits(fn)) {
            const auto& em = *s->as<EmitStmt>();
            // Phase 1: storage-backed simple identifiers among the arguments.
            std::vector<std::pair<const Expr*, const Symbol*>> storageArgs;
            for (const auto& a : em.args) {
                const Symbol* sym = variableOf(*a, tree);
                if (sym && sym->locationClass == LocationClass::StorageClass && !sym->constant)
                    storageArgs.emplace_back(a.get(), sym);
            }
            if (storageArgs.empty())
                continue;
            // Phase 2: proven-equal memory variables still in scope.
            auto facts = equalitiesAt(*s, fn, tree);
            auto visible = inScopeMemorySymbols(s->span, tree);
            for (const auto& [arg, sym] : storageArgs) {
                const Symbol* best = nullptr;
                for (const auto& fact : facts) {
                    if (fact.storageSym != sym
                        || std::find(visible.begin(), visible.end(), fact.memorySym) == visible.end())
                        continue;
                    if (!best || fact.memorySym->declSpan.begin < best->declSpan.begin)
                        best = fact.memorySym;
                }
                if (!best)
                    continue;
                auto d = make(CheckId::GasStorageParam, Severity::Warning, file, arg->span,
                              "event argument '" + sym->name + "' is read from storage (SLOAD costs 800 gas); "
                                  + "memory variable '" + best->name + "' holds the same value");
                d.suggestion = Suggestion{arg->span, best->name};
                out.push_back(std::move(d));
            }
        }
    });
    return out;
}

std::vector<Diagnostic> checkOveruse(const SourceFile& file, const LocStats& loc, std::size_t emitCount,
                                     const CheckConfig& cfg)
{
    if (loc.codeLines == 0)
        return {};
    double ratio = static_cast<double>(emitCount) / static_cast<double>(loc.codeLines);
    if (!(ratio > cfg.overuseThreshold))
        return {};
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu emits in %zu code lines (%.3f per line) exceeds the threshold %.3f",
                  emitCount, loc.codeLines, ratio, cfg.overuseThreshold);
    return {make(CheckId::EventOveruse, Severity::Info, file, file.spanOf(0, 0), buf)};
}

std::vector<Diagnostic> checkEmitBeforeOp(const SourceFile& file, const FunctionDef& fn, const ScopeTree& tree)
{
    std::vector<Diagnostic> out;
    forEachBlock(fn, [&](const std::vector<StmtPtr>& stmts) {
        for (std::size_t i = 0; i < stmts.size(); ++i) {
            const auto* em = stmts[i]->as<EmitStmt>();
            if (!em)
                continue;
            auto syms = variablesIn(em->args, tree);
            if (syms.empty())
                continue;
            for (std::size_t j = i + 1; j < stmts.size(); ++j) {
                const Stmt& later = *stmts[j];
                std::string what;
                auto written = assignedBy(later, tree);
                for (const Symbol* s : written)
                    if (syms.count(s)) {
                        what = "assignment to '" + s->name + "'";
                        break;
                    }
                if (what.empty())
                    if (const Expr* call = transferLikeCall(later, syms, tree))
                        what = "'" + call->as<CallExpr>()->callee->as<MemberAccessExpr>()->member + "' call";
                if (what.empty())
                    continue;
                out.push_back(make(CheckId::EmitBeforeOp, Severity::Warning, file, stmts[i]->span,
                                   "emit " + em->eventName + " precedes the " + what + " on line "
                                       + std::to_string(later.span.startLine) + "; move the emit after it"));
                break;
            }
        }
    });
    return out;
}

std::vector<Diagnostic> checkRedundantEvent(const SourceFile& file, const FunctionDef& fn, const ScopeTree& tree)
{
    std::vector<Diagnostic> out;
    forEachBlock(fn, [&](const std::vector<StmtPtr>& stmts) {
        std::vector<std::size_t> emitIdx;
        for (std::size_t i = 0; i < stmts.size(); ++i)
            if (stmts[i]->as<EmitStmt>())
                emitIdx.push_back(i);
        std::vector<ArgKeys> keys;
        std::vector<std::set<const Symbol*>> vars;
        for (std::size_t i : emitIdx) {
            keys.push_back(argKeys(*stmts[i]->as<EmitStmt>(), file, tree));
            vars.push_back(variablesIn(stmts[i]->as<EmitStmt>()->args, tree));
        }
        std::vector<bool> flagged(emitIdx.size(), false);
        for (std::size_t a = 0; a < emitIdx.size(); ++a) {
            for (std::size_t b = a + 1; b < emitIdx.size(); ++b) {
                // The included emit is the one reported; for equal argument
                // lists the later one is.
                std::size_t small = b;
                std::size_t big = a;
                if (!multisetIncludes(keys[a], keys[b])) {
                    if (!multisetIncludes(keys[b], keys[a]))
                        continue;
                    small = a;
                    big = b;
                }
                if (keys[small].empty() || flagged[small])
                    continue;
                bool killed = false;
                for (std::size_t k = emitIdx[a] + 1; k < emitIdx[b] && !killed; ++k) {
                    auto fx = effectsOf(*stmts[k], tree);
                    for (const Symbol* s : vars[small])
                        killed = killed || fx.killsSymbol(s);
                }
                if (killed)
                    continue;
                flagged[small] = true;
                const Stmt& s = *stmts[emitIdx[small]];
                const Stmt& other = *stmts[emitIdx[big]];
                out.push_back(make(CheckId::RedundantEvent, Severity::Info, file, s.span,
                                   "arguments of emit " + s.as<EmitStmt>()->eventName + " are already logged by emit "
                                       + other.as<EmitStmt>()->eventName + " on line "
                                       + std::to_string(other.span.startLine)));
            }
        }
    });
    return out;
}

std::vector<Diagnostic> checkDebugEvent(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                        const CheckConfig& cfg)
{
    std::vector<Diagnostic> out;
    forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef*) {
        auto emits = collectEmits(fn);
        std::map<std::string, std::vector<const Stmt*>> byName;
        for (const Stmt* s : emits) {
            const auto& em = *s->as<EmitStmt>();
            byName[em.eventName].push_back(s);
            if (em.args.empty()) {
                out.push_back(make(CheckId::DebugEvent, Severity::Hint, file, s->span,
                                   "event " + em.eventName + " carries no data; empty events are a debugging pattern"));
                continue;
            }
            if (em.args.size() == 1 && isStringLiteral(*em.args[0])) {
                out.push_back(make(CheckId::DebugEvent, Severity::Hint, file, s->span,
                                   "event " + em.eventName + " logs only a string literal, a debugging pattern"));
                continue;
            }
            if (cfg.debugEventFormB) {
                bool hasString = std::any_of(em.args.begin(), em.args.end(),
                                             [](const ExprPtr& a) { return isStringLiteral(*a); });
                if (hasString && !variablesIn(em.args, tree).empty())
                    out.push_back(make(CheckId::DebugEvent, Severity::Hint, file, s->span,
                                       "event " + em.eventName
                                           + " mixes variables with a string literal, a debugging pattern"));
            }
        }
        for (const auto& [name, sites] : byName) {
            if (sites.size() < 2)
                continue;
            out.push_back(make(CheckId::DebugEvent, Severity::Hint, file, sites.front()->span,
                               "event " + name + " is emitted " + std::to_string(sites.size()) + " times in "
                                   + (fn.name.empty() ? std::string("this function") : "function " + fn.name)
                                   + " (lines " + lineList(sites) + ")"));
        }
    });
    return out;
}

std::vector<Diagnostic> runChecks(const SourceFile& file, const SourceUnit& unit, const ScopeTree& tree,
                                  const LocStats& loc, std::size_t emitCount, const CheckConfig& cfg)
{
    cfg.validate();
    std::vector<Diagnostic> out;
    auto append = [&](std::vector<Diagnostic> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    if (cfg.isEnabled(CheckId::GasStorageParam))
        append(checkGasStorageParam(file, unit, tree, cfg));
    if (cfg.isEnabled(CheckId::EventOveruse))
        append(checkOveruse(file, loc, emitCount, cfg));
    if (cfg.isEnabled(CheckId::EmitBeforeOp) || cfg.isEnabled(CheckId::RedundantEvent))
        forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef*) {
            if (cfg.isEnabled(CheckId::EmitBeforeOp))
                append(checkEmitBeforeOp(file, fn, tree));
            if (cfg.isEnabled(CheckId::RedundantEvent))
                append(checkRedundantEvent(file, fn, tree));
        });
    if (cfg.isEnabled(CheckId::DebugEvent))
        append(checkDebugEvent(file, unit, tree, cfg));
    sortDiagnostics(out);
    return out;
}

void sortDiagnostics(std::vector<Diagnostic>& diags)
{
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.file, a.span.startLine, a.span.startCol, a.checkId, a.message)
             < std::tie(b.file, b.span.startLine, b.span.startCol, b.checkId, b.message);
    });
}

} // namespace evlint
