#include <evlint/dataflow.hpp>

#include <evlint/lexer.hpp>

#include <algorithm>
#include <array>
#include <map>

namespace evlint {

std::string_view toString(KillKind kind)
{
    switch (kind) {
    case KillKind::Reassigned: return "Reassigned";
    case KillKind::PassedAsCallArgument: return "PassedAsCallArgument";
    case KillKind::CompoundAssigned: return "CompoundAssigned";
    case KillKind::IncDec: return "IncDec";
    }
    return "?";
}

bool StmtEffects::killsSymbol(const Symbol* sym) const
{
    if (!sym)
        return false;
    if (clobbersStorage && sym->locationClass == LocationClass::StorageClass && !sym->constant)
        return true;
    return std::any_of(kills.begin(), kills.end(), [&](const KillEvent& k) { return k.victim == sym; });
}

namespace {

constexpr std::array kPureBuiltins = {
    "require", "assert", "revert", "keccak256", "sha256", "sha3", "ripemd160", "ecrecover",
    "gasleft", "blockhash", "addmod",  "mulmod",  "type",   "blobhash",
};

const Symbol* variableOf(const Expr& e, const ScopeTree& tree)
{
    const Symbol* sym = resolve(e, tree);
    return sym && sym->isVariable() ? sym : nullptr;
}

/// Walks expressions in evaluation order and reports their effects through hooks.
class EffectWalker {
public:
    explicit EffectWalker(const ScopeTree& tree) : m_tree(&tree) {}
    virtual ~EffectWalker() = default;

    void expr(const Expr* e, bool conditional = false)
    {
        if (!e)
            return;
        if (auto a = e->as<AssignmentExpr>()) {
            assignment(*e, *a, conditional);
        } else if (auto u = e->as<UnaryExpr>()) {
            expr(u->operand.get(), conditional);
            if (u->op == "++" || u->op == "--")
                write(*u->operand, KillKind::IncDec, e->span);
            else if (u->op == "delete")
                write(*u->operand, KillKind::Reassigned, e->span);
        } else if (auto c = e->as<CallExpr>()) {
            call(*e, *c, conditional);
        } else if (auto b = e->as<BinaryExpr>()) {
            expr(b->lhs.get(), conditional);
            bool shortCircuit = b->op == "&&" || b->op == "||";
            expr(b->rhs.get(), conditional || shortCircuit);
        } else if (auto q = e->as<ConditionalExpr>()) {
            expr(q->cond.get(), conditional);
            expr(q->whenTrue.get(), true);
            expr(q->whenFalse.get(), true);
        } else if (auto m = e->as<MemberAccessExpr>()) {
            expr(m->base.get(), conditional);
        } else if (auto i = e->as<IndexAccessExpr>()) {
            expr(i->base.get(), conditional);
            expr(i->index.get(), conditional);
        } else if (auto t = e->as<TupleExpr>()) {
            for (const auto& el : t->elements)
                expr(el.get(), conditional);
        }
    }

protected:
    virtual void remove(const Symbol* sym, KillKind kind, const Span& at) = 0;
    virtual void killClass(const Symbol* sym, KillKind kind, const Span& at) = 0;
    virtual void clobberStorage() = 0;
    virtual void join(const Symbol* target, const Symbol* source, const Span& at) = 0;

    const ScopeTree* m_tree;

private:
    void assignment(const Expr& whole, const AssignmentExpr& a, bool conditional)
    {
        expr(a.rhs.get(), conditional);
        indexEffects(*a.lhs, conditional);
        KillKind kind = a.op == "=" ? KillKind::Reassigned : KillKind::CompoundAssigned;
        if (a.op == "=" && !conditional) {
            const Symbol* target = variableOf(*a.lhs, *m_tree);
            const Symbol* source = a.rhs->as<IdentifierExpr>() ? variableOf(*a.rhs, *m_tree) : nullptr;
            if (target && source) {
                if (target != source)
                    join(target, source, whole.span);
                return;
            }
        }
        write(*a.lhs, kind, whole.span);
    }

    /// Side effects inside the index and base expressions of an lvalue.
    void indexEffects(const Expr& lhs, bool conditional)
    {
        if (auto m = lhs.as<MemberAccessExpr>()) {
            indexEffects(*m->base, conditional);
        } else if (auto i = lhs.as<IndexAccessExpr>()) {
            indexEffects(*i->base, conditional);
            expr(i->index.get(), conditional);
        } else if (auto t = lhs.as<TupleExpr>()) {
            for (const auto& el : t->elements)
                if (el)
                    indexEffects(*el, conditional);
        } else if (!lhs.as<IdentifierExpr>()) {
            expr(&lhs, conditional);
        }
    }

    void write(const Expr& lhs, KillKind kind, const Span& at)
    {
        if (auto t = lhs.as<TupleExpr>()) {
            for (const auto& el : t->elements)
                if (el)
                    write(*el, kind, at);
            return;
        }
        if (lhs.as<IdentifierExpr>()) {
            if (const Symbol* sym = variableOf(lhs, *m_tree))
                remove(sym, kind, at);
            return;
        }
        const Expr* root = rootIdentifier(lhs);
        const Symbol* sym = root ? variableOf(*root, *m_tree) : nullptr;
        if (sym) {
            killClass(sym, kind, at);
            if (sym->locationClass == LocationClass::StorageClass)
                clobberStorage();
        } else {
            clobberStorage();
        }
    }

    void call(const Expr& whole, const CallExpr& c, bool conditional)
    {
        expr(c.callee.get(), conditional);
        for (const auto& o : c.options)
            expr(o.get(), conditional);
        for (const auto& a : c.args)
            expr(a.get(), conditional);
        for (const auto& a : c.args)
            forEachExpr(a.get(), [&](const Expr& inner) {
                if (inner.as<IdentifierExpr>())
                    if (const Symbol* sym = variableOf(inner, *m_tree))
                        killClass(sym, KillKind::PassedAsCallArgument, whole.span);
            });
        if (auto m = c.callee->as<MemberAccessExpr>()) {
            if (const Expr* root = rootIdentifier(*m->base))
                if (const Symbol* sym = variableOf(*root, *m_tree))
                    killClass(sym, KillKind::PassedAsCallArgument, whole.span);
        }
        if (!isPureBuiltinCallee(*c.callee, *m_tree))
            clobberStorage();
    }
};

class EffectRecorder final : public EffectWalker {
public:
    using EffectWalker::EffectWalker;
    StmtEffects effects;

protected:
    void remove(const Symbol* sym, KillKind kind, const Span& at) override { effects.kills.push_back({kind, sym, at}); }
    void killClass(const Symbol* sym, KillKind kind, const Span& at) override { effects.kills.push_back({kind, sym, at}); }
    void clobberStorage() override { effects.clobbersStorage = true; }
    void join(const Symbol* target, const Symbol*, const Span& at) override
    {
        effects.kills.push_back({KillKind::Reassigned, target, at});
    }
};

void recordStmt(const Stmt& stmt, EffectRecorder& rec, const ScopeTree& tree)
{
    forEachStmt(stmt, [&](const Stmt& s) {
        if (auto d = s.as<LocalVarDeclStmt>()) {
            rec.expr(d->init.get());
            for (const auto& v : d->vars)
                if (v)
                    if (const Symbol* sym = tree.declaredAt(v->span))
                        rec.effects.kills.push_back({KillKind::Reassigned, sym, s.span});
            return;
        }
        if (s.as<UnparsedStmt>()) {
            rec.effects.clobbersStorage = true;
            return;
        }
        forEachOwnExpr(s, [&](const Expr& e) { rec.expr(&e); });
    });
}

/// Equivalence classes over variable symbols.
class FactState final : public EffectWalker {
public:
    using EffectWalker::EffectWalker;

    void dropAll() { m_members.clear(); }

    void declare(const Symbol* sym, const Expr* init, const Span& at)
    {
        const Symbol* source = init && init->as<IdentifierExpr>() ? variableOf(*init, *m_tree) : nullptr;
        if (source && source != sym)
            join(sym, source, at);
        else
            m_members.erase(sym);
    }

    std::vector<std::pair<const Symbol*, const Symbol*>> pairs(std::vector<Span>* established = nullptr) const
    {
        std::vector<std::pair<const Symbol*, const Symbol*>> out;
        for (auto a = m_members.begin(); a != m_members.end(); ++a)
            for (auto b = std::next(a); b != m_members.end(); ++b)
                if (a->second.classId == b->second.classId) {
                    out.emplace_back(a->first, b->first);
                    if (established)
                        established->push_back(a->second.joinedAt.begin >= b->second.joinedAt.begin
                                                   ? a->second.joinedAt
                                                   : b->second.joinedAt);
                }
        return out;
    }

protected:
    void remove(const Symbol* sym, KillKind, const Span&) override { m_members.erase(sym); }

    void killClass(const Symbol* sym, KillKind, const Span&) override
    {
        auto it = m_members.find(sym);
        if (it == m_members.end())
            return;
        int id = it->second.classId;
        std::erase_if(m_members, [&](const auto& kv) { return kv.second.classId == id; });
    }

    void clobberStorage() override
    {
        std::erase_if(m_members, [](const auto& kv) {
            return kv.first->locationClass == LocationClass::StorageClass && !kv.first->constant;
        });
    }

    void join(const Symbol* target, const Symbol* source, const Span& at) override
    {
        m_members.erase(target);
        auto it = m_members.find(source);
        if (it == m_members.end())
            it = m_members.emplace(source, Member{m_nextClass++, at}).first;
        m_members[target] = Member{it->second.classId, at};
    }

private:
    struct Member {
        int classId;
        Span joinedAt;
    };
    struct ById {
        bool operator()(const Symbol* a, const Symbol* b) const { return a->id < b->id; }
    };
    std::map<const Symbol*, Member, ById> m_members;
    int m_nextClass = 0;
};

bool isContainer(const Stmt& s)
{
    return s.as<BlockStmt>() || s.as<IfStmt>() || s.as<ForStmt>() || s.as<WhileStmt>() || s.as<TryStmt>();
}

/// Straight-line effect of a statement that does not contain the target.
void transfer(const Stmt& s, FactState& st, const ScopeTree& tree)
{
    if (auto b = s.as<BlockStmt>()) {
        for (const auto& child : b->stmts)
            transfer(*child, st, tree);
    } else if (auto d = s.as<LocalVarDeclStmt>()) {
        st.expr(d->init.get());
        for (const auto& v : d->vars) {
            if (!v)
                continue;
            const Symbol* sym = tree.declaredAt(v->span);
            if (sym)
                st.declare(sym, d->isTuple() ? nullptr : d->init.get(), s.span);
        }
    } else if (auto e = s.as<ExprStmt>()) {
        st.expr(e->expr.get());
    } else if (auto em = s.as<EmitStmt>()) {
        for (const auto& a : em->args)
            st.expr(a.get());
    } else {
        // Branches, loops, try, return and unparsed code: no fact survives.
        st.dropAll();
    }
}

/// Advances `st` along the path from `s` to `target`. Returns false when the
/// target is not inside `s`.
bool walkTo(const Stmt& s, const Stmt& target, FactState& st, const ScopeTree& tree)
{
    if (&s == &target)
        return true;
    if (!s.span.contains(target.span) || !isContainer(s))
        return false;
    if (auto b = s.as<BlockStmt>()) {
        for (const auto& child : b->stmts) {
            if (walkTo(*child, target, st, tree))
                return true;
            transfer(*child, st, tree);
        }
        return false;
    }
    if (auto i = s.as<IfStmt>()) {
        st.expr(i->cond.get());
        for (const Stmt* branch : {i->thenBranch.get(), i->elseBranch.get()}) {
            if (!branch)
                continue;
            FactState copy = st;
            if (walkTo(*branch, target, copy, tree)) {
                st = std::move(copy);
                return true;
            }
        }
        return false;
    }
    if (auto f = s.as<ForStmt>()) {
        if (f->init) {
            if (walkTo(*f->init, target, st, tree))
                return true;
            transfer(*f->init, st, tree);
        }
        st.dropAll();
        return f->body && walkTo(*f->body, target, st, tree);
    }
    if (auto w = s.as<WhileStmt>()) {
        st.dropAll();
        return w->body && walkTo(*w->body, target, st, tree);
    }
    if (auto t = s.as<TryStmt>()) {
        st.expr(t->call.get());
        for (const auto& clause : t->clauses) {
            if (!clause.body)
                continue;
            FactState copy = st;
            if (walkTo(*clause.body, target, copy, tree)) {
                st = std::move(copy);
                return true;
            }
        }
        return false;
    }
    return false;
}

bool stateAt(const Stmt& emit, const FunctionDef& fn, FactState& st, const ScopeTree& tree)
{
    if (!fn.body || !walkTo(*fn.body, emit, st, tree))
        return false;
    // Calls among the emit's own arguments run before the log is written.
    if (auto em = emit.as<EmitStmt>())
        for (const auto& a : em->args)
            st.expr(a.get());
    return true;
}

} // namespace

bool isPureBuiltinCallee(const Expr& callee, const ScopeTree& tree)
{
    if (auto id = callee.as<IdentifierExpr>()) {
        const Symbol* sym = resolve(callee, tree);
        if (!sym)
            return false;
        if (sym->kind == SymbolKind::ContractName)
            return true;
        if (sym->kind != SymbolKind::Builtin)
            return false;
        return isElementaryTypeName(id->name) || id->name == "address" || id->name == "payable"
            || std::find(kPureBuiltins.begin(), kPureBuiltins.end(), id->name) != kPureBuiltins.end();
    }
    if (auto m = callee.as<MemberAccessExpr>()) {
        if (auto base = m->base->as<IdentifierExpr>(); base && base->name == "abi") {
            const Symbol* sym = resolve(*m->base, tree);
            return sym && sym->kind == SymbolKind::Builtin;
        }
        return false;
    }
    // `uint[](n)` style allocations through `new` write only fresh memory.
    if (auto u = callee.as<UnaryExpr>(); u && u->op == "new")
        return true;
    return false;
}

StmtEffects effectsOf(const Stmt& stmt, const ScopeTree& tree)
{
    EffectRecorder rec(tree);
    recordStmt(stmt, rec, tree);
    return std::move(rec.effects);
}

std::vector<EqualityFact> equalitiesAt(const Stmt& emit, const FunctionDef& fn, const ScopeTree& tree)
{
    FactState st(tree);
    if (!stateAt(emit, fn, st, tree))
        return {};
    std::vector<Span> established;
    auto pairs = st.pairs(&established);
    std::vector<EqualityFact> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        if (a->locationClass == LocationClass::MemoryClass && b->locationClass == LocationClass::StorageClass)
            std::swap(a, b);
        if (a->locationClass == LocationClass::StorageClass && b->locationClass == LocationClass::MemoryClass)
            out.push_back({a, b, established[i]});
    }
    return out;
}

std::vector<std::pair<const Symbol*, const Symbol*>> variableEqualitiesAt(const Stmt& emit, const FunctionDef& fn,
                                                                          const ScopeTree& tree)
{
    FactState st(tree);
    if (!stateAt(emit, fn, st, tree))
        return {};
    return st.pairs();
}

} // namespace evlint
