#include <evlint/ast.hpp>

#include <sstream>

namespace evlint {

std::string_view toString(DataLocation loc)
{
    switch (loc) {
    case DataLocation::Default: return "default";
    case DataLocation::Memory: return "memory";
    case DataLocation::Storage: return "storage";
    case DataLocation::Calldata: return "calldata";
    }
    return "?";
}

std::string_view toString(ContractKind kind)
{
    switch (kind) {
    case ContractKind::Contract: return "contract";
    case ContractKind::Interface: return "interface";
    case ContractKind::Library: return "library";
    case ContractKind::Abstract: return "abstract";
    }
    return "?";
}

bool SourceUnit::hasFatalErrors() const
{
    for (const auto& e : parseErrors)
        if (e.severity == ParseSeverity::Error)
            return true;
    return false;
}

namespace {

template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

void forEachExpr(const Expr* root, const std::function<void(const Expr&)>& visit)
{
    if (!root)
        return;
    visit(*root);
    std::visit(Overloaded{
                   [](const IdentifierExpr&) {},
                   [](const LiteralExpr&) {},
                   [&](const MemberAccessExpr& e) { forEachExpr(e.base.get(), visit); },
                   [&](const IndexAccessExpr& e) {
                       forEachExpr(e.base.get(), visit);
                       forEachExpr(e.index.get(), visit);
                   },
                   [&](const CallExpr& e) {
                       forEachExpr(e.callee.get(), visit);
                       for (const auto& o : e.options)
                           forEachExpr(o.get(), visit);
                       for (const auto& a : e.args)
                           forEachExpr(a.get(), visit);
                   },
                   [&](const BinaryExpr& e) {
                       forEachExpr(e.lhs.get(), visit);
                       forEachExpr(e.rhs.get(), visit);
                   },
                   [&](const UnaryExpr& e) { forEachExpr(e.operand.get(), visit); },
                   [&](const AssignmentExpr& e) {
                       forEachExpr(e.lhs.get(), visit);
                       forEachExpr(e.rhs.get(), visit);
                   },
                   [&](const ConditionalExpr& e) {
                       forEachExpr(e.cond.get(), visit);
                       forEachExpr(e.whenTrue.get(), visit);
                       forEachExpr(e.whenFalse.get(), visit);
                   },
                   [&](const TupleExpr& e) {
                       for (const auto& el : e.elements)
                           forEachExpr(el.get(), visit);
                   },
               },
               root->node);
}

void forEachOwnExpr(const Stmt& stmt, const std::function<void(const Expr&)>& visit)
{
    auto one = [&](const ExprPtr& e) {
        if (e)
            visit(*e);
    };
    std::visit(Overloaded{
                   [](const BlockStmt&) {},
                   [](const UnparsedStmt&) {},
                   [&](const IfStmt& s) { one(s.cond); },
                   [&](const ForStmt& s) {
                       one(s.cond);
                       one(s.post);
                   },
                   [&](const WhileStmt& s) { one(s.cond); },
                   [&](const EmitStmt& s) {
                       for (const auto& a : s.args)
                           one(a);
                   },
                   [&](const LocalVarDeclStmt& s) { one(s.init); },
                   [&](const ExprStmt& s) { one(s.expr); },
                   [&](const ReturnStmt& s) { one(s.expr); },
                   [&](const TryStmt& s) { one(s.call); },
               },
               stmt.node);
}

void forEachStmt(const Stmt& root, const std::function<void(const Stmt&)>& visit)
{
    visit(root);
    auto child = [&](const StmtPtr& s) {
        if (s)
            forEachStmt(*s, visit);
    };
    std::visit(Overloaded{
                   [&](const BlockStmt& s) {
                       for (const auto& c : s.stmts)
                           child(c);
                   },
                   [&](const IfStmt& s) {
                       child(s.thenBranch);
                       child(s.elseBranch);
                   },
                   [&](const ForStmt& s) {
                       child(s.init);
                       child(s.body);
                   },
                   [&](const WhileStmt& s) { child(s.body); },
                   [&](const TryStmt& s) {
                       for (const auto& c : s.clauses)
                           child(c.body);
                   },
                   [](const auto&) {},
               },
               root.node);
}

void forEachFunction(const SourceUnit& unit, const std::function<void(const FunctionDef&, const ContractDef*)>& visit)
{
    for (const auto& c : unit.contracts)
        for (const auto& f : c.functions)
            visit(f, &c);
    for (const auto& f : unit.freeFunctions)
        visit(f, nullptr);
}

std::vector<const Stmt*> collectEmits(const FunctionDef& fn)
{
    std::vector<const Stmt*> out;
    if (fn.body)
        forEachStmt(*fn.body, [&](const Stmt& s) {
            if (s.as<EmitStmt>())
                out.push_back(&s);
        });
    return out;
}

std::size_t countEmitStatements(const SourceUnit& unit)
{
    std::size_t n = 0;
    forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef*) { n += collectEmits(fn).size(); });
    return n;
}

const Expr* rootIdentifier(const Expr& expr)
{
    const Expr* cur = &expr;
    while (cur) {
        if (cur->as<IdentifierExpr>())
            return cur;
        if (auto m = cur->as<MemberAccessExpr>())
            cur = m->base.get();
        else if (auto i = cur->as<IndexAccessExpr>())
            cur = i->base.get();
        else
            return nullptr;
    }
    return nullptr;
}

namespace {

void dumpExpr(std::ostream& os, const Expr* e);

void dumpList(std::ostream& os, const std::vector<ExprPtr>& list)
{
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i)
            os << ' ';
        dumpExpr(os, list[i].get());
    }
}

void dumpExpr(std::ostream& os, const Expr* e)
{
    if (!e) {
        os << "_";
        return;
    }
    std::visit(Overloaded{
                   [&](const IdentifierExpr& x) { os << "(id " << x.name << ')'; },
                   [&](const LiteralExpr& x) { os << "(lit " << static_cast<int>(x.kind) << ' ' << x.text << ')'; },
                   [&](const MemberAccessExpr& x) {
                       os << "(member ";
                       dumpExpr(os, x.base.get());
                       os << ' ' << x.member << ')';
                   },
                   [&](const IndexAccessExpr& x) {
                       os << "(index ";
                       dumpExpr(os, x.base.get());
                       os << ' ';
                       dumpExpr(os, x.index.get());
                       os << ')';
                   },
                   [&](const CallExpr& x) {
                       os << "(call ";
                       dumpExpr(os, x.callee.get());
                       os << " {";
                       dumpList(os, x.options);
                       os << "} [";
                       dumpList(os, x.args);
                       os << "])";
                   },
                   [&](const BinaryExpr& x) {
                       os << "(" << x.op << ' ';
                       dumpExpr(os, x.lhs.get());
                       os << ' ';
                       dumpExpr(os, x.rhs.get());
                       os << ')';
                   },
                   [&](const UnaryExpr& x) {
                       os << "(" << (x.postfix ? "post" : "pre") << x.op << ' ';
                       dumpExpr(os, x.operand.get());
                       os << ')';
                   },
                   [&](const AssignmentExpr& x) {
                       os << "(assign" << x.op << ' ';
                       dumpExpr(os, x.lhs.get());
                       os << ' ';
                       dumpExpr(os, x.rhs.get());
                       os << ')';
                   },
                   [&](const ConditionalExpr& x) {
                       os << "(? ";
                       dumpExpr(os, x.cond.get());
                       os << ' ';
                       dumpExpr(os, x.whenTrue.get());
                       os << ' ';
                       dumpExpr(os, x.whenFalse.get());
                       os << ')';
                   },
                   [&](const TupleExpr& x) {
                       os << (x.isArray ? "(array " : "(tuple ");
                       dumpList(os, x.elements);
                       os << ')';
                   },
               },
               e->node);
}

void dumpDecl(std::ostream& os, const VarDeclaration& d)
{
    os << "(var " << d.typeName << ' ' << toString(d.location) << ' ' << d.name << ')';
}

void dumpStmt(std::ostream& os, const Stmt* s)
{
    if (!s) {
        os << "_";
        return;
    }
    std::visit(Overloaded{
                   [&](const BlockStmt& x) {
                       os << (x.unchecked ? "(unchecked" : "(block");
                       for (const auto& c : x.stmts) {
                           os << ' ';
                           dumpStmt(os, c.get());
                       }
                       os << ')';
                   },
                   [&](const IfStmt& x) {
                       os << "(if ";
                       dumpExpr(os, x.cond.get());
                       os << ' ';
                       dumpStmt(os, x.thenBranch.get());
                       os << ' ';
                       dumpStmt(os, x.elseBranch.get());
                       os << ')';
                   },
                   [&](const ForStmt& x) {
                       os << "(for ";
                       dumpStmt(os, x.init.get());
                       os << ' ';
                       dumpExpr(os, x.cond.get());
                       os << ' ';
                       dumpExpr(os, x.post.get());
                       os << ' ';
                       dumpStmt(os, x.body.get());
                       os << ')';
                   },
                   [&](const WhileStmt& x) {
                       os << (x.doWhile ? "(do " : "(while ");
                       dumpExpr(os, x.cond.get());
                       os << ' ';
                       dumpStmt(os, x.body.get());
                       os << ')';
                   },
                   [&](const EmitStmt& x) {
                       os << "(emit " << x.eventName << " [";
                       dumpList(os, x.args);
                       os << "])";
                   },
                   [&](const LocalVarDeclStmt& x) {
                       os << "(decl";
                       for (const auto& v : x.vars) {
                           os << ' ';
                           if (v)
                               dumpDecl(os, *v);
                           else
                               os << '_';
                       }
                       os << ' ';
                       dumpExpr(os, x.init.get());
                       os << ')';
                   },
                   [&](const ExprStmt& x) {
                       os << "(expr ";
                       dumpExpr(os, x.expr.get());
                       os << ')';
                   },
                   [&](const ReturnStmt& x) {
                       os << "(return ";
                       dumpExpr(os, x.expr.get());
                       os << ')';
                   },
                   [&](const TryStmt& x) {
                       os << "(try ";
                       dumpExpr(os, x.call.get());
                       for (const auto& c : x.clauses) {
                           os << " (" << (c.isReturns ? "returns" : "catch") << ' ' << c.errorName;
                           for (const auto& p : c.params) {
                               os << ' ';
                               dumpDecl(os, p);
                           }
                           os << ' ';
                           dumpStmt(os, c.body.get());
                           os << ')';
                       }
                       os << ')';
                   },
                   [&](const UnparsedStmt& x) { os << "(unparsed " << x.rawText << ')'; },
               },
               s->node);
}

} // namespace

std::string dump(const Expr& expr)
{
    std::ostringstream os;
    dumpExpr(os, &expr);
    return os.str();
}

std::string dump(const Stmt& stmt)
{
    std::ostringstream os;
    dumpStmt(os, &stmt);
    return os.str();
}

} // namespace evlint
