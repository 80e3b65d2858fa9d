#include <evlint/symbols.hpp>

#include <evlint/lexer.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <set>
#include <unordered_set>

namespace evlint {

std::string_view toString(SymbolKind kind)
{
    switch (kind) {
    case SymbolKind::StateVar: return "StateVar";
    case SymbolKind::LocalVar: return "LocalVar";
    case SymbolKind::Param: return "Param";
    case SymbolKind::EventName: return "EventName";
    case SymbolKind::FunctionName: return "FunctionName";
    case SymbolKind::ContractName: return "ContractName";
    case SymbolKind::Builtin: return "Builtin";
    }
    return "?";
}

std::string_view toString(LocationClass cls)
{
    switch (cls) {
    case LocationClass::StorageClass: return "StorageClass";
    case LocationClass::MemoryClass: return "MemoryClass";
    case LocationClass::NotApplicable: return "NotApplicable";
    }
    return "?";
}

namespace {

constexpr std::array kBuiltinNames = {
    "msg",       "block",   "tx",      "this",     "address",   "abi",        "super",  "now",
    "gasleft",   "keccak256", "sha256", "sha3",    "ripemd160", "ecrecover",  "addmod", "mulmod",
    "require",   "assert",  "revert",  "selfdestruct", "suicide", "blockhash", "type",  "payable",
    "blobhash",
};

constexpr std::string_view kElementaryBuiltin = "<elementary-type>";

std::string_view stripArraySuffix(std::string_view t)
{
    return t.substr(0, t.find('['));
}

} // namespace

bool isValueTypeName(std::string_view typeName, const std::vector<std::string>& enumNames,
                     const std::vector<std::string>& contractNames)
{
    if (typeName.find('[') != std::string_view::npos || typeName.starts_with("mapping("))
        return false;
    if (typeName.starts_with("function"))
        return true;
    if (typeName == "string" || typeName == "bytes")
        return false;
    if (isElementaryTypeName(typeName) || typeName == "address payable")
        return true;
    auto last = typeName.substr(typeName.rfind('.') == std::string_view::npos ? 0 : typeName.rfind('.') + 1);
    auto known = [&](const std::vector<std::string>& names) {
        return std::find(names.begin(), names.end(), typeName) != names.end()
            || std::find(names.begin(), names.end(), last) != names.end();
    };
    return known(enumNames) || known(contractNames);
}

class SymbolTableBuilder {
public:
    explicit SymbolTableBuilder(const SourceUnit& unit) : m_unit(unit) {}

    ScopeTree build()
    {
        collectTypeNames();
        std::size_t fileEnd = 0;
        for (const auto& c : m_unit.contracts)
            fileEnd = std::max(fileEnd, c.span.end);
        for (const auto& f : m_unit.freeFunctions)
            fileEnd = std::max(fileEnd, f.span.end);
        Span fileSpan;
        fileSpan.begin = 0;
        fileSpan.end = std::max<std::size_t>(fileEnd, 1);
        ScopeId root = newScope(std::nullopt, ScopeKind::File, fileSpan);

        for (auto name : kBuiltinNames)
            m_tree.m_builtins.push_back(addBuiltin(root, name));
        m_tree.m_builtins.push_back(addBuiltin(root, kElementaryBuiltin));

        for (const auto& c : m_unit.contracts)
            addNamed(root, c.name, SymbolKind::ContractName, "contract", c.span, false);
        for (const auto& e : m_unit.events)
            addNamed(root, e.name, SymbolKind::EventName, "event", e.span, false);
        for (const auto& f : m_unit.freeFunctions)
            if (!f.name.empty())
                addNamed(root, f.name, SymbolKind::FunctionName, "function", f.span, false);

        for (const auto& c : m_unit.contracts)
            buildContract(root, c);
        for (const auto& f : m_unit.freeFunctions)
            buildFunction(root, f);

        collectUnresolved();
        return std::move(m_tree);
    }

private:
    void collectTypeNames()
    {
        for (const auto& e : m_unit.enums)
            m_enums.push_back(e.name);
        for (const auto& c : m_unit.contracts) {
            m_contracts.push_back(c.name);
            for (const auto& e : c.enums)
                m_enums.push_back(e.name);
        }
    }

    ScopeId newScope(std::optional<ScopeId> parent, ScopeKind kind, const Span& span)
    {
        auto id = static_cast<ScopeId>(m_tree.m_scopes.size());
        Scope s;
        s.id = id;
        s.parent = parent;
        s.kind = kind;
        s.span = span;
        m_tree.m_scopes.push_back(std::move(s));
        if (parent)
            m_tree.m_scopes[*parent].children.push_back(id);
        return id;
    }

    SymbolId push(Symbol sym, bool indexByDecl)
    {
        sym.id = static_cast<SymbolId>(m_tree.m_symbols.size());
        m_tree.m_scopes[sym.scopeId].symbols.push_back(sym.id);
        if (indexByDecl)
            m_tree.m_byDeclBegin.emplace(sym.declSpan.begin, sym.id);
        m_tree.m_symbols.push_back(std::move(sym));
        return m_tree.m_symbols.back().id;
    }

    SymbolId addBuiltin(ScopeId root, std::string_view name)
    {
        Symbol sym;
        sym.name = std::string(name);
        sym.kind = SymbolKind::Builtin;
        sym.locationClass = LocationClass::NotApplicable;
        sym.scopeId = root;
        // Builtins live outside the scope lists; resolution falls back to them.
        sym.id = static_cast<SymbolId>(m_tree.m_symbols.size());
        m_tree.m_symbols.push_back(std::move(sym));
        return m_tree.m_symbols.back().id;
    }

    const Symbol* findInScope(ScopeId scope, std::string_view name) const
    {
        for (auto id : m_tree.m_scopes[scope].symbols)
            if (m_tree.m_symbols[id].name == name)
                return &m_tree.m_symbols[id];
        return nullptr;
    }

    void warnDuplicate(std::string_view name, const Span& span)
    {
        m_tree.m_warnings.push_back({"duplicate declaration of '" + std::string(name) + "'; first declaration wins", span});
    }

    void addNamed(ScopeId scope, std::string_view name, SymbolKind kind, std::string_view type, const Span& span,
                  bool rejectDuplicates)
    {
        if (rejectDuplicates) {
            if (const Symbol* prior = findInScope(scope, name); prior && prior->kind == kind) {
                warnDuplicate(name, span);
                return;
            }
        }
        Symbol sym;
        sym.name = std::string(name);
        sym.kind = kind;
        sym.declaredType = std::string(type);
        sym.locationClass = LocationClass::NotApplicable;
        sym.declSpan = span;
        sym.scopeId = scope;
        push(std::move(sym), false);
    }

    bool valueType(const std::string& typeName, DataLocation loc) const
    {
        if (isValueTypeName(typeName, m_enums, m_contracts))
            return true;
        // A user-defined name not declared in this file and used without a
        // data location can only be an imported enum, contract or value type.
        auto base = stripArraySuffix(typeName);
        bool userDefined = !base.empty() && base == typeName && !isElementaryTypeName(base)
                        && !typeName.starts_with("mapping(") && typeName != "string" && typeName != "bytes";
        if (userDefined && loc == DataLocation::Default) {
            for (const auto& c : m_unit.contracts)
                for (const auto& s : c.structs)
                    if (s.name == typeName)
                        return false;
            for (const auto& s : m_unit.structs)
                if (s.name == typeName)
                    return false;
            return true;
        }
        return false;
    }

    void addVariable(ScopeId scope, const std::string& name, const std::string& typeName, DataLocation loc,
                     SymbolKind kind, const Span& span, std::size_t visibleFrom, bool externalParam)
    {
        if (name.empty())
            return;
        if (const Symbol* prior = findInScope(scope, name); prior && prior->isVariable()) {
            warnDuplicate(name, span);
            return;
        }
        Symbol sym;
        sym.name = name;
        sym.kind = kind;
        sym.declaredType = typeName;
        sym.valueType = valueType(typeName, loc);
        sym.dataLocation = loc;
        if (loc == DataLocation::Default && !sym.valueType)
            sym.dataLocation = externalParam ? DataLocation::Calldata : DataLocation::Memory;
        bool storage = loc == DataLocation::Storage || typeName.starts_with("mapping(");
        sym.locationClass = storage ? LocationClass::StorageClass : LocationClass::MemoryClass;
        sym.declSpan = span;
        sym.scopeId = scope;
        sym.visibleFrom = visibleFrom;
        push(std::move(sym), true);
    }

    void addStateVar(ScopeId scope, const StateVarDecl& v, const std::optional<std::string>& inheritedFrom)
    {
        if (const Symbol* prior = findInScope(scope, v.name); prior && prior->kind == SymbolKind::StateVar) {
            if (!inheritedFrom)
                warnDuplicate(v.name, v.span);
            return;
        }
        Symbol sym;
        sym.name = v.name;
        sym.kind = SymbolKind::StateVar;
        sym.declaredType = v.typeName;
        sym.valueType = isValueTypeName(v.typeName, m_enums, m_contracts);
        sym.dataLocation = DataLocation::Storage;
        sym.locationClass = LocationClass::StorageClass;
        sym.constant = v.constant || v.immutable;
        sym.declSpan = v.span;
        sym.scopeId = scope;
        sym.inheritedFrom = inheritedFrom;
        push(std::move(sym), !inheritedFrom);
    }

    const ContractDef* findContract(std::string_view name) const
    {
        auto last = name.substr(name.rfind('.') == std::string_view::npos ? 0 : name.rfind('.') + 1);
        for (const auto& c : m_unit.contracts)
            if (c.name == last)
                return &c;
        return nullptr;
    }

    void importBases(ScopeId scope, const ContractDef& c, std::set<std::string>& visited)
    {
        for (const auto& baseName : c.bases) {
            const ContractDef* base = findContract(baseName);
            if (!base || !visited.insert(base->name).second)
                continue;
            for (const auto& v : base->stateVars)
                addStateVar(scope, v, base->name);
            for (const auto& e : base->events)
                if (!findInScope(scope, e.name))
                    addNamed(scope, e.name, SymbolKind::EventName, "event", e.span, false);
            importBases(scope, *base, visited);
        }
    }

    void buildContract(ScopeId root, const ContractDef& c)
    {
        ScopeId scope = newScope(root, ScopeKind::Contract, c.span);
        for (const auto& v : c.stateVars)
            addStateVar(scope, v, std::nullopt);
        for (const auto& e : c.events)
            addNamed(scope, e.name, SymbolKind::EventName, "event", e.span, true);
        for (const auto& f : c.functions)
            if (!f.name.empty())
                addNamed(scope, f.name, SymbolKind::FunctionName,
                         f.kind == FunctionKind::Modifier ? "modifier" : "function", f.span, false);
        std::set<std::string> visited{c.name};
        importBases(scope, c, visited);
        for (const auto& f : c.functions)
            buildFunction(scope, f);
    }

    void buildFunction(ScopeId parent, const FunctionDef& fn)
    {
        ScopeId scope = newScope(parent, ScopeKind::Function, fn.span);
        bool external = fn.visibility == "external";
        for (const auto& p : fn.params)
            addVariable(scope, p.name, p.typeName, p.dataLocation, SymbolKind::Param, p.span, fn.span.begin, external);
        for (const auto& p : fn.returns)
            addVariable(scope, p.name, p.typeName, p.dataLocation, SymbolKind::LocalVar, p.span, fn.span.begin, false);
        if (fn.body)
            buildStmt(scope, *fn.body);
    }

    void buildStmt(ScopeId scope, const Stmt& stmt)
    {
        if (auto b = stmt.as<BlockStmt>()) {
            ScopeId inner = newScope(scope, ScopeKind::Block, stmt.span);
            for (const auto& s : b->stmts)
                buildStmt(inner, *s);
        } else if (auto d = stmt.as<LocalVarDeclStmt>()) {
            for (const auto& v : d->vars)
                if (v)
                    addVariable(scope, v->name, v->typeName, v->location, SymbolKind::LocalVar, v->span, stmt.span.end,
                                false);
        } else if (auto i = stmt.as<IfStmt>()) {
            if (i->thenBranch)
                buildStmt(scope, *i->thenBranch);
            if (i->elseBranch)
                buildStmt(scope, *i->elseBranch);
        } else if (auto f = stmt.as<ForStmt>()) {
            ScopeId inner = newScope(scope, ScopeKind::Block, stmt.span);
            if (f->init)
                buildStmt(inner, *f->init);
            if (f->body)
                buildStmt(inner, *f->body);
        } else if (auto w = stmt.as<WhileStmt>()) {
            if (w->body)
                buildStmt(scope, *w->body);
        } else if (auto t = stmt.as<TryStmt>()) {
            for (const auto& clause : t->clauses) {
                if (!clause.body)
                    continue;
                ScopeId inner = newScope(scope, ScopeKind::Block, clause.body->span);
                for (const auto& p : clause.params)
                    addVariable(inner, p.name, p.typeName, p.location, SymbolKind::LocalVar, p.span,
                                clause.body->span.begin, false);
                buildStmt(inner, *clause.body);
            }
        }
    }

    void collectUnresolved()
    {
        forEachFunction(m_unit, [&](const FunctionDef& fn, const ContractDef*) {
            for (const Stmt* s : collectEmits(fn))
                for (const auto& arg : s->as<EmitStmt>()->args)
                    forEachExpr(arg.get(), [&](const Expr& e) {
                        if (auto id = e.as<IdentifierExpr>(); id && !resolve(id->name, e.span, m_tree))
                            m_tree.m_unresolved.push_back({id->name, e.span});
                    });
        });
    }

    const SourceUnit& m_unit;
    ScopeTree m_tree;
    std::vector<std::string> m_enums;
    std::vector<std::string> m_contracts;
};

ScopeId ScopeTree::innermostScopeAt(const Span& at) const
{
    if (m_scopes.empty())
        return 0;
    ScopeId cur = 0;
    bool descended = true;
    while (descended) {
        descended = false;
        for (ScopeId child : m_scopes[cur].children) {
            if (m_scopes[child].span.begin <= at.begin && at.end <= m_scopes[child].span.end) {
                cur = child;
                descended = true;
                break;
            }
        }
    }
    return cur;
}

const Symbol* ScopeTree::builtin(std::string_view name) const
{
    for (auto id : m_builtins)
        if (m_symbols[id].name == name)
            return &m_symbols[id];
    if (isElementaryTypeName(name) || name == "address payable")
        for (auto id : m_builtins)
            if (m_symbols[id].name == kElementaryBuiltin)
                return &m_symbols[id];
    return nullptr;
}

const Symbol* ScopeTree::declaredAt(const Span& declSpan) const
{
    auto it = m_byDeclBegin.find(declSpan.begin);
    return it == m_byDeclBegin.end() ? nullptr : &m_symbols[it->second];
}

ScopeTree buildSymbols(const SourceUnit& unit)
{
    return SymbolTableBuilder(unit).build();
}

namespace {

bool visibleAt(const Symbol& sym, const Span& at)
{
    return sym.kind != SymbolKind::LocalVar || sym.visibleFrom <= at.begin;
}

} // namespace

const Symbol* resolve(std::string_view name, const Span& at, const ScopeTree& tree)
{
    if (tree.scopes().empty())
        return nullptr;
    std::optional<ScopeId> cur = tree.innermostScopeAt(at);
    while (cur) {
        const Scope& scope = tree.scope(*cur);
        for (auto id : scope.symbols) {
            const Symbol& sym = tree.symbol(id);
            if (sym.name == name && visibleAt(sym, at))
                return &sym;
        }
        cur = scope.parent;
    }
    return tree.builtin(name);
}

const Symbol* resolve(const Expr& identifier, const ScopeTree& tree)
{
    auto id = identifier.as<IdentifierExpr>();
    return id ? resolve(id->name, identifier.span, tree) : nullptr;
}

std::vector<const Symbol*> inScopeMemorySymbols(const Span& at, const ScopeTree& tree)
{
    std::vector<const Symbol*> out;
    if (tree.scopes().empty())
        return out;
    std::unordered_set<std::string> seen;
    std::optional<ScopeId> cur = tree.innermostScopeAt(at);
    while (cur) {
        const Scope& scope = tree.scope(*cur);
        for (auto id : scope.symbols) {
            const Symbol& sym = tree.symbol(id);
            if (!visibleAt(sym, at) || !seen.insert(sym.name).second)
                continue;
            if ((sym.kind == SymbolKind::Param || sym.kind == SymbolKind::LocalVar)
                && sym.locationClass == LocationClass::MemoryClass)
                out.push_back(&sym);
        }
        cur = scope.parent;
    }
    return out;
}

} // namespace evlint
