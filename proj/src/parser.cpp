#include <evlint/parser.hpp>

#include <algorithm>
#include <array>
#include <cctype>

namespace evlint {

namespace {

struct SyntaxError {
    std::string message;
    std::size_t tokenIndex;
};

constexpr std::array kAssignOps = {"=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>=", ">>>="};

constexpr std::array kNumberUnits = {"wei",  "gwei",  "szabo", "finney", "ether", "seconds",
                                     "minutes", "hours", "days", "weeks", "years"};

int binaryPrecedence(std::string_view op)
{
    if (op == "||")
        return 1;
    if (op == "&&")
        return 2;
    if (op == "==" || op == "!=")
        return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=")
        return 4;
    if (op == "|")
        return 5;
    if (op == "^")
        return 6;
    if (op == "&")
        return 7;
    if (op == "<<" || op == ">>" || op == ">>>")
        return 8;
    if (op == "+" || op == "-")
        return 9;
    if (op == "*" || op == "/" || op == "%")
        return 10;
    if (op == "**")
        return 11;
    return -1;
}

bool isHexAddress(std::string_view text)
{
    if (text.size() != 42 || !(text.starts_with("0x") || text.starts_with("0X")))
        return false;
    return std::all_of(text.begin() + 2, text.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

bool isWordToken(const Token& t)
{
    return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword;
}

class Parser {
public:
    Parser(std::span<const Token> tokens, const SourceFile& file) : m_tokens(tokens), m_file(file) {}

    SourceUnit parseUnit()
    {
        SourceUnit unit;
        while (!atEnd()) {
            std::size_t start = m_pos;
            try {
                parseTopLevel(unit);
            } catch (const SyntaxError& e) {
                recordError(e);
                m_pos = start;
                skipConstruct();
            }
        }
        unit.parseErrors = std::move(m_errors);
        return unit;
    }

    StatementParse parseSingleStatement()
    {
        StatementParse out;
        if (atEnd()) {
            m_errors.push_back({ParseSeverity::Error, "expected a statement", m_file.spanOf(0, 0)});
        } else {
            out.stmt = parseStatementRecovering();
            if (!atEnd())
                m_errors.push_back({ParseSeverity::Error, "trailing tokens after statement", peek().span});
        }
        out.errors = std::move(m_errors);
        return out;
    }

private:
    // -- token helpers ------------------------------------------------------

    bool atEnd() const { return m_pos >= m_tokens.size(); }

    const Token& peek(std::size_t ahead = 0) const
    {
        static const Token eof{TokenKind::Punct, "", {}};
        return m_pos + ahead < m_tokens.size() ? m_tokens[m_pos + ahead] : eof;
    }

    bool has(std::size_t ahead = 0) const { return m_pos + ahead < m_tokens.size(); }
    bool atPunct(std::string_view p, std::size_t ahead = 0) const { return has(ahead) && peek(ahead).isPunct(p); }
    bool atKeyword(std::string_view k, std::size_t ahead = 0) const { return has(ahead) && peek(ahead).isKeyword(k); }
    bool atOperator(std::string_view o, std::size_t ahead = 0) const { return has(ahead) && peek(ahead).isOperator(o); }
    bool atIdentifier(std::size_t ahead = 0) const { return has(ahead) && peek(ahead).kind == TokenKind::Identifier; }
    bool atIdentifier(std::string_view name, std::size_t ahead = 0) const
    {
        return atIdentifier(ahead) && peek(ahead).lexeme == name;
    }

    const Token& advance()
    {
        if (atEnd())
            fail("unexpected end of input");
        return m_tokens[m_pos++];
    }

    [[noreturn]] void fail(std::string message) const
    {
        throw SyntaxError{std::move(message), std::min(m_pos, m_tokens.empty() ? 0 : m_tokens.size() - 1)};
    }

    const Token& expectPunct(std::string_view p)
    {
        if (!atPunct(p))
            fail("expected '" + std::string(p) + "'" + found());
        return advance();
    }

    const Token& expectKeyword(std::string_view k)
    {
        if (!atKeyword(k))
            fail("expected '" + std::string(k) + "'" + found());
        return advance();
    }

    const Token& expectIdentifier()
    {
        if (!atIdentifier())
            fail("expected identifier" + found());
        return advance();
    }

    std::string found() const
    {
        return atEnd() ? " but reached end of input" : " but found '" + peek().lexeme + "'";
    }

    bool acceptPunct(std::string_view p)
    {
        if (!atPunct(p))
            return false;
        ++m_pos;
        return true;
    }

    Span spanFrom(std::size_t startTok) const
    {
        if (m_tokens.empty())
            return m_file.spanOf(0, 0);
        std::size_t begin = m_tokens[std::min(startTok, m_tokens.size() - 1)].span.begin;
        std::size_t end = m_pos > startTok ? m_tokens[m_pos - 1].span.end : begin;
        return m_file.spanOf(begin, end);
    }

    void recordError(const SyntaxError& e)
    {
        Span span = m_tokens.empty() ? m_file.spanOf(0, 0) : m_tokens[e.tokenIndex].span;
        m_errors.push_back({ParseSeverity::Error, e.message, span});
    }

    /// Skips one construct from the current token: stops after a ';' at depth
    /// zero, after the '}' closing a group opened here, or before a '}' that
    /// closes an enclosing group. Always makes progress.
    void skipConstruct()
    {
        std::size_t start = m_pos;
        int depth = 0;
        while (!atEnd()) {
            const Token& t = peek();
            if (t.kind == TokenKind::Punct) {
                if (t.lexeme == "(" || t.lexeme == "[" || t.lexeme == "{") {
                    ++depth;
                } else if (t.lexeme == ")" || t.lexeme == "]" || t.lexeme == "}") {
                    if (depth == 0) {
                        if (t.lexeme == "}")
                            break;
                    } else {
                        --depth;
                        if (depth == 0 && t.lexeme == "}") {
                            ++m_pos;
                            break;
                        }
                    }
                } else if (t.lexeme == ";" && depth == 0) {
                    ++m_pos;
                    break;
                }
            }
            ++m_pos;
        }
        if (m_pos == start && !atEnd())
            ++m_pos;
    }

    void skipToSemicolon()
    {
        int depth = 0;
        while (!atEnd()) {
            const Token& t = advance();
            if (t.isPunct("(") || t.isPunct("[") || t.isPunct("{"))
                ++depth;
            else if (t.isPunct(")") || t.isPunct("]") || t.isPunct("}"))
                depth = std::max(0, depth - 1);
            else if (t.isPunct(";") && depth == 0)
                return;
        }
    }

    /// Consumes a balanced group starting at the current opening token.
    void skipBalanced(std::string_view open, std::string_view close)
    {
        expectPunct(open);
        int depth = 1;
        while (depth > 0) {
            if (atEnd())
                fail("unbalanced '" + std::string(open) + "'");
            const Token& t = advance();
            if (t.isPunct(open))
                ++depth;
            else if (t.isPunct(close))
                --depth;
        }
    }

    template <class F> bool speculate(F&& f)
    {
        std::size_t save = m_pos;
        auto errorCount = m_errors.size();
        bool ok = false;
        try {
            ok = f();
        } catch (const SyntaxError&) {
            ok = false;
        }
        m_pos = save;
        m_errors.resize(errorCount);
        return ok;
    }

    // -- top level ----------------------------------------------------------

    void parseTopLevel(SourceUnit& unit)
    {
        std::size_t start = m_pos;
        if (atKeyword("pragma")) {
            advance();
            skipToSemicolon();
            Span span = spanFrom(start);
            unit.pragmas.push_back({std::string(m_file.slice(span)), span});
        } else if (atKeyword("import")) {
            skipToSemicolon();
            unit.imports.push_back({spanFrom(start)});
        } else if (atKeyword("contract") || atKeyword("interface") || atKeyword("library")
                   || (atKeyword("abstract") && atKeyword("contract", 1))) {
            unit.contracts.push_back(parseContract());
        } else if (atKeyword("function")) {
            unit.freeFunctions.push_back(parseFunction());
        } else if (atKeyword("struct")) {
            unit.structs.push_back(parseStruct());
        } else if (atKeyword("enum")) {
            unit.enums.push_back(parseEnum());
        } else if (atKeyword("event")) {
            unit.events.push_back(parseEvent());
        } else if (atKeyword("using") || (atIdentifier("error") && atIdentifier(1))
                   || (atIdentifier("type") && atIdentifier(1) && atKeyword("is", 2))) {
            skipToSemicolon();
        } else if (looksLikeFileConstant()) {
            skipToSemicolon();
        } else {
            fail("unexpected '" + peek().lexeme + "' at file level");
        }
    }

    bool looksLikeFileConstant()
    {
        return speculate([&] {
            parseTypeName();
            return atKeyword("constant");
        });
    }

    ContractDef parseContract()
    {
        std::size_t start = m_pos;
        ContractDef c;
        if (atKeyword("abstract")) {
            advance();
            c.kind = ContractKind::Abstract;
            expectKeyword("contract");
        } else {
            const Token& kw = advance();
            c.kind = kw.lexeme == "interface" ? ContractKind::Interface
                   : kw.lexeme == "library"   ? ContractKind::Library
                                              : ContractKind::Contract;
        }
        c.name = expectIdentifier().lexeme;
        if (atKeyword("is")) {
            advance();
            do {
                c.bases.push_back(parseQualifiedName());
                if (atPunct("("))
                    skipBalanced("(", ")");
            } while (acceptPunct(","));
        }
        expectPunct("{");
        while (!atPunct("}")) {
            if (atEnd()) {
                m_errors.push_back({ParseSeverity::Error, "missing '}' closing contract " + c.name, spanFrom(start)});
                c.span = spanFrom(start);
                return c;
            }
            std::size_t memberStart = m_pos;
            try {
                parseMember(c);
            } catch (const SyntaxError& e) {
                recordError(e);
                m_pos = memberStart;
                skipConstruct();
            }
        }
        expectPunct("}");
        c.span = spanFrom(start);
        return c;
    }

    void parseMember(ContractDef& c)
    {
        if (atKeyword("function"))
            c.functions.push_back(parseFunction());
        else if (atKeyword("modifier"))
            c.functions.push_back(parseModifier());
        else if (atKeyword("constructor") || ((atKeyword("fallback") || atKeyword("receive")) && atPunct("(", 1)))
            c.functions.push_back(parseSpecialFunction());
        else if (atKeyword("event"))
            c.events.push_back(parseEvent());
        else if (atKeyword("struct"))
            c.structs.push_back(parseStruct());
        else if (atKeyword("enum"))
            c.enums.push_back(parseEnum());
        else if (atKeyword("using") || (atIdentifier("error") && atIdentifier(1))
                 || (atIdentifier("type") && atIdentifier(1) && atKeyword("is", 2)))
            skipToSemicolon();
        else
            c.stateVars.push_back(parseStateVar());
    }

    std::string parseQualifiedName()
    {
        std::string name = expectIdentifier().lexeme;
        while (atPunct(".") && atIdentifier(1)) {
            advance();
            name += "." + advance().lexeme;
        }
        return name;
    }

    // -- types --------------------------------------------------------------

    std::string parseTypeName()
    {
        std::string text;
        if (atKeyword("mapping")) {
            advance();
            expectPunct("(");
            std::string key = parseTypeName();
            if (atIdentifier())
                advance();
            if (!atOperator("=>"))
                fail("expected '=>' in mapping type" + found());
            advance();
            std::string value = parseTypeName();
            if (atIdentifier())
                advance();
            expectPunct(")");
            text = "mapping(" + key + "=>" + value + ")";
        } else if (atKeyword("function")) {
            std::size_t start = m_pos;
            advance();
            skipBalanced("(", ")");
            while (atKeyword("internal") || atKeyword("external") || atKeyword("pure") || atKeyword("view")
                   || atKeyword("payable"))
                advance();
            if (atKeyword("returns")) {
                advance();
                skipBalanced("(", ")");
            }
            text = compactText(start, m_pos);
        } else if (has() && peek().kind == TokenKind::Keyword && isElementaryTypeName(peek().lexeme)) {
            text = advance().lexeme;
            if (text == "address" && atKeyword("payable")) {
                advance();
                text += " payable";
            }
        } else if (atIdentifier()) {
            text = parseQualifiedName();
        } else {
            fail("expected type name" + found());
        }
        while (atPunct("[")) {
            std::size_t start = m_pos;
            advance();
            if (!atPunct("]"))
                parseExpression();
            expectPunct("]");
            text += compactText(start, m_pos);
        }
        return text;
    }

    std::string compactText(std::size_t fromTok, std::size_t toTok) const
    {
        std::string out;
        for (std::size_t i = fromTok; i < toTok; ++i) {
            if (!out.empty() && isWordToken(m_tokens[i]) && isWordToken(m_tokens[i - 1]))
                out += ' ';
            out += m_tokens[i].lexeme;
        }
        return out;
    }

    std::optional<DataLocation> acceptLocation()
    {
        if (atKeyword("memory")) {
            advance();
            return DataLocation::Memory;
        }
        if (atKeyword("storage")) {
            advance();
            return DataLocation::Storage;
        }
        if (atKeyword("calldata")) {
            advance();
            return DataLocation::Calldata;
        }
        return std::nullopt;
    }

    // -- declarations -------------------------------------------------------

    Param parseParam(bool requireName)
    {
        std::size_t start = m_pos;
        Param p;
        p.typeName = parseTypeName();
        p.dataLocation = acceptLocation().value_or(DataLocation::Default);
        if (atIdentifier())
            p.name = advance().lexeme;
        else if (requireName)
            fail("expected parameter name" + found());
        p.span = spanFrom(start);
        return p;
    }

    std::vector<Param> parseParamList()
    {
        std::vector<Param> params;
        expectPunct("(");
        if (!atPunct(")")) {
            do {
                params.push_back(parseParam(false));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return params;
    }

    EventDef parseEvent()
    {
        std::size_t start = m_pos;
        expectKeyword("event");
        EventDef ev;
        ev.name = expectIdentifier().lexeme;
        expectPunct("(");
        if (!atPunct(")")) {
            do {
                std::size_t pstart = m_pos;
                EventParam p;
                p.typeName = parseTypeName();
                if (atKeyword("indexed")) {
                    advance();
                    p.indexed = true;
                }
                if (atIdentifier())
                    p.name = advance().lexeme;
                p.span = spanFrom(pstart);
                ev.params.push_back(std::move(p));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        if (atKeyword("anonymous")) {
            advance();
            ev.anonymous = true;
        }
        expectPunct(";");
        ev.span = spanFrom(start);
        auto indexed = std::count_if(ev.params.begin(), ev.params.end(), [](const EventParam& p) { return p.indexed; });
        const long limit = ev.anonymous ? 4 : 3;
        if (indexed > limit)
            m_errors.push_back({ParseSeverity::Warning,
                                "event " + ev.name + " declares " + std::to_string(indexed)
                                    + " indexed parameters; at most " + std::to_string(limit) + " are allowed",
                                ev.span});
        return ev;
    }

    StructDef parseStruct()
    {
        std::size_t start = m_pos;
        expectKeyword("struct");
        StructDef s;
        s.name = expectIdentifier().lexeme;
        expectPunct("{");
        while (!atPunct("}")) {
            s.fields.push_back(parseParam(true));
            expectPunct(";");
        }
        expectPunct("}");
        s.span = spanFrom(start);
        return s;
    }

    EnumDef parseEnum()
    {
        std::size_t start = m_pos;
        expectKeyword("enum");
        EnumDef e;
        e.name = expectIdentifier().lexeme;
        expectPunct("{");
        if (!atPunct("}")) {
            do {
                if (atPunct("}"))
                    break;
                e.members.push_back(expectIdentifier().lexeme);
            } while (acceptPunct(","));
        }
        expectPunct("}");
        e.span = spanFrom(start);
        return e;
    }

    StateVarDecl parseStateVar()
    {
        std::size_t start = m_pos;
        StateVarDecl v;
        v.typeName = parseTypeName();
        while (true) {
            if (atKeyword("public") || atKeyword("private") || atKeyword("internal")) {
                v.visibility = advance().lexeme;
            } else if (atKeyword("constant")) {
                advance();
                v.constant = true;
            } else if (atKeyword("immutable")) {
                advance();
                v.immutable = true;
            } else if (atKeyword("override")) {
                advance();
                if (atPunct("("))
                    skipBalanced("(", ")");
            } else if (atIdentifier("transient") && atIdentifier(1)) {
                advance();
            } else {
                break;
            }
        }
        v.name = expectIdentifier().lexeme;
        if (atOperator("=")) {
            advance();
            v.init = parseExpression();
        }
        expectPunct(";");
        v.span = spanFrom(start);
        return v;
    }

    void parseFunctionAttributes(FunctionDef& fn)
    {
        while (!atPunct("{") && !atPunct(";")) {
            if (atEnd())
                fail("unexpected end of input in function header");
            if (atKeyword("public") || atKeyword("private") || atKeyword("internal") || atKeyword("external")) {
                fn.visibility = advance().lexeme;
            } else if (atKeyword("pure") || atKeyword("view") || atKeyword("payable") || atKeyword("constant")) {
                fn.mutability = advance().lexeme;
            } else if (atKeyword("virtual")) {
                advance();
            } else if (atKeyword("override")) {
                advance();
                if (atPunct("("))
                    skipBalanced("(", ")");
            } else if (atKeyword("returns")) {
                advance();
                fn.returns = parseParamList();
            } else if (atIdentifier()) {
                fn.modifiers.push_back(parseQualifiedName());
                if (atPunct("("))
                    skipBalanced("(", ")");
            } else {
                fail("unexpected '" + peek().lexeme + "' in function header");
            }
        }
    }

    void parseFunctionBody(FunctionDef& fn)
    {
        if (atPunct(";"))
            advance();
        else
            fn.body = parseBlock();
    }

    FunctionDef parseFunction()
    {
        std::size_t start = m_pos;
        expectKeyword("function");
        FunctionDef fn;
        if (atIdentifier()) {
            fn.name = advance().lexeme;
        } else if (atKeyword("fallback") || atKeyword("receive")) {
            fn.kind = peek().lexeme == "fallback" ? FunctionKind::Fallback : FunctionKind::Receive;
            advance();
        } else {
            fn.kind = FunctionKind::Fallback;
        }
        fn.params = parseParamList();
        parseFunctionAttributes(fn);
        parseFunctionBody(fn);
        fn.span = spanFrom(start);
        return fn;
    }

    FunctionDef parseSpecialFunction()
    {
        std::size_t start = m_pos;
        FunctionDef fn;
        const Token& kw = advance();
        fn.kind = kw.lexeme == "constructor" ? FunctionKind::Constructor
                : kw.lexeme == "fallback"    ? FunctionKind::Fallback
                                             : FunctionKind::Receive;
        fn.params = parseParamList();
        parseFunctionAttributes(fn);
        parseFunctionBody(fn);
        fn.span = spanFrom(start);
        return fn;
    }

    FunctionDef parseModifier()
    {
        std::size_t start = m_pos;
        expectKeyword("modifier");
        FunctionDef fn;
        fn.kind = FunctionKind::Modifier;
        fn.name = expectIdentifier().lexeme;
        if (atPunct("("))
            fn.params = parseParamList();
        parseFunctionAttributes(fn);
        parseFunctionBody(fn);
        fn.span = spanFrom(start);
        return fn;
    }

    // -- statements ---------------------------------------------------------

    StmtPtr makeStmt(std::size_t startTok, auto&& node)
    {
        auto s = std::make_unique<Stmt>();
        s->node = std::forward<decltype(node)>(node);
        s->span = spanFrom(startTok);
        return s;
    }

    StmtPtr unparsedFrom(std::size_t startTok)
    {
        Span span = spanFrom(startTok);
        return makeStmt(startTok, UnparsedStmt{std::string(m_file.slice(span))});
    }

    StmtPtr parseBlock()
    {
        std::size_t start = m_pos;
        BlockStmt block;
        if (atKeyword("unchecked")) {
            advance();
            block.unchecked = true;
        }
        expectPunct("{");
        while (!atPunct("}")) {
            if (atEnd()) {
                m_errors.push_back({ParseSeverity::Error, "missing '}' closing block", spanFrom(start)});
                return makeStmt(start, std::move(block));
            }
            block.stmts.push_back(parseStatementRecovering());
        }
        advance();
        return makeStmt(start, std::move(block));
    }

    StmtPtr parseStatementRecovering()
    {
        std::size_t start = m_pos;
        try {
            return parseStatement();
        } catch (const SyntaxError& e) {
            recordError(e);
            m_pos = start;
            skipConstruct();
            return unparsedFrom(start);
        }
    }

    StmtPtr parseStatement()
    {
        std::size_t start = m_pos;
        if (atPunct("{") || (atKeyword("unchecked") && atPunct("{", 1)))
            return parseBlock();
        if (atKeyword("if"))
            return parseIf();
        if (atKeyword("for"))
            return parseFor();
        if (atKeyword("while"))
            return parseWhile();
        if (atKeyword("do"))
            return parseDoWhile();
        if (atKeyword("try"))
            return parseTry();
        if (atKeyword("emit"))
            return parseEmit();
        if (atKeyword("return")) {
            advance();
            ReturnStmt r;
            if (!atPunct(";"))
                r.expr = parseExpression();
            expectPunct(";");
            return makeStmt(start, std::move(r));
        }
        if (atKeyword("assembly")) {
            advance();
            if (has() && peek().kind == TokenKind::StringLit)
                advance();
            if (atPunct("("))
                skipBalanced("(", ")");
            skipBalanced("{", "}");
            return unparsedFrom(start);
        }
        if (atKeyword("break") || atKeyword("continue")) {
            advance();
            expectPunct(";");
            return unparsedFrom(start);
        }
        if (atIdentifier("revert") && atIdentifier(1))
            return parseExpressionStatement();
        if (atPunct("(") && looksLikeTupleDecl())
            return parseTupleDecl();
        if (looksLikeVarDecl())
            return parseVarDeclStatement();
        return parseExpressionStatement();
    }

    bool looksLikeVarDecl()
    {
        return speculate([&] {
            parseTypeName();
            return atIdentifier() || atKeyword("memory") || atKeyword("storage") || atKeyword("calldata");
        });
    }

    bool looksLikeTupleDecl()
    {
        return speculate([&] {
            expectPunct("(");
            bool sawDecl = false;
            while (true) {
                if (!atPunct(",") && !atPunct(")")) {
                    parseTypeName();
                    acceptLocation();
                    expectIdentifier();
                    sawDecl = true;
                }
                if (acceptPunct(","))
                    continue;
                expectPunct(")");
                break;
            }
            return sawDecl && atOperator("=");
        });
    }

    VarDeclaration parseVarDeclaration()
    {
        std::size_t start = m_pos;
        VarDeclaration d;
        d.typeName = parseTypeName();
        d.location = acceptLocation().value_or(DataLocation::Default);
        d.name = expectIdentifier().lexeme;
        d.span = spanFrom(start);
        return d;
    }

    StmtPtr parseVarDeclStatement()
    {
        std::size_t start = m_pos;
        LocalVarDeclStmt decl;
        decl.vars.emplace_back(parseVarDeclaration());
        if (atOperator("=")) {
            advance();
            decl.init = parseExpression();
        }
        expectPunct(";");
        return makeStmt(start, std::move(decl));
    }

    StmtPtr parseTupleDecl()
    {
        std::size_t start = m_pos;
        LocalVarDeclStmt decl;
        expectPunct("(");
        while (true) {
            if (atPunct(",") || atPunct(")"))
                decl.vars.emplace_back(std::nullopt);
            else
                decl.vars.emplace_back(parseVarDeclaration());
            if (acceptPunct(","))
                continue;
            expectPunct(")");
            break;
        }
        if (!atOperator("="))
            fail("expected '=' after tuple declaration");
        advance();
        decl.init = parseExpression();
        expectPunct(";");
        return makeStmt(start, std::move(decl));
    }

    StmtPtr parseExpressionStatement()
    {
        std::size_t start = m_pos;
        ExprStmt s;
        if (atIdentifier("revert") && atIdentifier(1)) {
            // `revert CustomError(args);` becomes revert(CustomError(args)).
            auto callee = makeIdentifier(m_pos, advance().lexeme);
            auto inner = parsePostfix(parsePrimary());
            CallExpr call;
            call.callee = std::move(callee);
            call.args.push_back(std::move(inner));
            s.expr = makeExpr(start, std::move(call));
        } else {
            s.expr = parseExpression();
        }
        expectPunct(";");
        return makeStmt(start, std::move(s));
    }

    StmtPtr parseIf()
    {
        std::size_t start = m_pos;
        expectKeyword("if");
        IfStmt s;
        expectPunct("(");
        s.cond = parseExpression();
        expectPunct(")");
        s.thenBranch = parseStatementRecovering();
        if (atKeyword("else")) {
            advance();
            s.elseBranch = parseStatementRecovering();
        }
        return makeStmt(start, std::move(s));
    }

    StmtPtr parseFor()
    {
        std::size_t start = m_pos;
        expectKeyword("for");
        ForStmt s;
        expectPunct("(");
        if (acceptPunct(";")) {
        } else if (looksLikeVarDecl()) {
            s.init = parseVarDeclStatement();
        } else {
            s.init = parseExpressionStatement();
        }
        if (!atPunct(";"))
            s.cond = parseExpression();
        expectPunct(";");
        if (!atPunct(")"))
            s.post = parseExpression();
        expectPunct(")");
        s.body = parseStatementRecovering();
        return makeStmt(start, std::move(s));
    }

    StmtPtr parseWhile()
    {
        std::size_t start = m_pos;
        expectKeyword("while");
        WhileStmt s;
        expectPunct("(");
        s.cond = parseExpression();
        expectPunct(")");
        s.body = parseStatementRecovering();
        return makeStmt(start, std::move(s));
    }

    StmtPtr parseDoWhile()
    {
        std::size_t start = m_pos;
        expectKeyword("do");
        WhileStmt s;
        s.doWhile = true;
        s.body = parseStatementRecovering();
        expectKeyword("while");
        expectPunct("(");
        s.cond = parseExpression();
        expectPunct(")");
        expectPunct(";");
        return makeStmt(start, std::move(s));
    }

    std::vector<VarDeclaration> parseClauseParams()
    {
        std::vector<VarDeclaration> params;
        expectPunct("(");
        if (!atPunct(")")) {
            do {
                std::size_t pstart = m_pos;
                VarDeclaration d;
                d.typeName = parseTypeName();
                d.location = acceptLocation().value_or(DataLocation::Default);
                if (atIdentifier())
                    d.name = advance().lexeme;
                d.span = spanFrom(pstart);
                params.push_back(std::move(d));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return params;
    }

    StmtPtr parseTry()
    {
        std::size_t start = m_pos;
        expectKeyword("try");
        TryStmt s;
        s.call = parseExpression();
        TryClause success;
        success.isReturns = true;
        if (atKeyword("returns")) {
            advance();
            success.params = parseClauseParams();
        }
        success.body = parseBlock();
        s.clauses.push_back(std::move(success));
        if (!atKeyword("catch"))
            fail("expected 'catch' after try block" + found());
        while (atKeyword("catch")) {
            advance();
            TryClause clause;
            if (atIdentifier())
                clause.errorName = advance().lexeme;
            if (atPunct("("))
                clause.params = parseClauseParams();
            clause.body = parseBlock();
            s.clauses.push_back(std::move(clause));
        }
        return makeStmt(start, std::move(s));
    }

    StmtPtr parseEmit()
    {
        std::size_t start = m_pos;
        expectKeyword("emit");
        std::size_t nameStart = m_pos;
        std::string name = parseQualifiedName();
        Span nameSpan = spanFrom(nameStart);
        EmitStmt s;
        s.eventName = std::move(name);
        s.nameSpan = nameSpan;
        if (!atPunct("("))
            fail("expected '(' after event name" + found());
        s.args = parseArguments();
        expectPunct(";");
        return makeStmt(start, std::move(s));
    }

    // -- expressions --------------------------------------------------------

    ExprPtr makeExpr(std::size_t startTok, auto&& node)
    {
        auto e = std::make_unique<Expr>();
        e->node = std::forward<decltype(node)>(node);
        e->span = spanFrom(startTok);
        return e;
    }

    ExprPtr makeIdentifier(std::size_t tok, std::string name)
    {
        auto e = std::make_unique<Expr>();
        e->node = IdentifierExpr{std::move(name)};
        e->span = m_tokens[tok].span;
        return e;
    }

    ExprPtr parseExpression() { return parseAssignment(); }

    bool atAssignOp() const
    {
        if (!has() || peek().kind != TokenKind::Operator)
            return false;
        return std::find(kAssignOps.begin(), kAssignOps.end(), peek().lexeme) != kAssignOps.end();
    }

    ExprPtr parseAssignment()
    {
        std::size_t start = m_pos;
        auto lhs = parseConditional();
        if (atAssignOp()) {
            std::string op = advance().lexeme;
            auto rhs = parseAssignment();
            return makeExpr(start, AssignmentExpr{std::move(lhs), std::move(rhs), std::move(op)});
        }
        return lhs;
    }

    ExprPtr parseConditional()
    {
        std::size_t start = m_pos;
        auto cond = parseBinary(1);
        if (atOperator("?")) {
            advance();
            auto a = parseAssignment();
            if (!atOperator(":"))
                fail("expected ':' in conditional expression" + found());
            advance();
            auto b = parseAssignment();
            return makeExpr(start, ConditionalExpr{std::move(cond), std::move(a), std::move(b)});
        }
        return cond;
    }

    ExprPtr parseBinary(int minPrec)
    {
        std::size_t start = m_pos;
        auto lhs = parseUnary();
        while (has() && peek().kind == TokenKind::Operator) {
            int prec = binaryPrecedence(peek().lexeme);
            if (prec < minPrec)
                break;
            std::string op = advance().lexeme;
            auto rhs = parseBinary(op == "**" ? prec : prec + 1);
            lhs = makeExpr(start, BinaryExpr{std::move(op), std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr parseUnary()
    {
        std::size_t start = m_pos;
        if (atOperator("!") || atOperator("~") || atOperator("-") || atOperator("+") || atOperator("++")
            || atOperator("--") || atKeyword("delete")) {
            std::string op = advance().lexeme;
            auto operand = parseUnary();
            return makeExpr(start, UnaryExpr{std::move(op), std::move(operand), false});
        }
        return parsePostfix(parsePrimary());
    }

    bool atCallOptions() const
    {
        return atPunct("{") && (atIdentifier(1) || (has(1) && peek(1).kind == TokenKind::Keyword)) && atOperator(":", 2);
    }

    std::vector<ExprPtr> parseNamedValues()
    {
        std::vector<ExprPtr> values;
        expectPunct("{");
        if (!atPunct("}")) {
            do {
                if (atPunct("}"))
                    break;
                advance(); // name
                if (!atOperator(":"))
                    fail("expected ':' in named argument list" + found());
                advance();
                values.push_back(parseExpression());
            } while (acceptPunct(","));
        }
        expectPunct("}");
        return values;
    }

    std::vector<ExprPtr> parseArguments()
    {
        std::vector<ExprPtr> args;
        expectPunct("(");
        if (atPunct("{")) {
            args = parseNamedValues();
        } else if (!atPunct(")")) {
            do {
                args.push_back(parseExpression());
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return args;
    }

    ExprPtr parsePostfix(ExprPtr expr)
    {
        std::size_t start = m_pos;
        std::size_t exprBegin = expr->span.begin;
        auto finish = [&](auto&& node) {
            auto e = makeExpr(start, std::forward<decltype(node)>(node));
            e->span = m_file.spanOf(exprBegin, e->span.end);
            return e;
        };
        while (true) {
            if (atPunct(".")) {
                advance();
                if (!has() || !isWordToken(peek()))
                    fail("expected member name" + found());
                std::string member = advance().lexeme;
                expr = finish(MemberAccessExpr{std::move(expr), std::move(member)});
            } else if (atPunct("[")) {
                advance();
                ExprPtr index;
                if (!atPunct("]") && !atOperator(":"))
                    index = parseExpression();
                if (atOperator(":")) {
                    std::size_t sliceStart = m_pos;
                    advance();
                    ExprPtr upper;
                    if (!atPunct("]"))
                        upper = parseExpression();
                    index = makeExpr(sliceStart, BinaryExpr{":", std::move(index), std::move(upper)});
                }
                expectPunct("]");
                expr = finish(IndexAccessExpr{std::move(expr), std::move(index)});
            } else if (atCallOptions()) {
                auto options = parseNamedValues();
                if (!atPunct("(")) {
                    expr = finish(CallExpr{std::move(expr), {}, std::move(options)});
                    continue;
                }
                auto args = parseArguments();
                expr = finish(CallExpr{std::move(expr), std::move(args), std::move(options)});
            } else if (atPunct("(")) {
                auto args = parseArguments();
                expr = finish(CallExpr{std::move(expr), std::move(args), {}});
            } else if (atOperator("++") || atOperator("--")) {
                std::string op = advance().lexeme;
                expr = finish(UnaryExpr{std::move(op), std::move(expr), true});
            } else {
                return expr;
            }
        }
    }

    ExprPtr parsePrimary()
    {
        std::size_t start = m_pos;
        if (atEnd())
            fail("expected expression but reached end of input");
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Identifier:
            if ((t.lexeme == "hex" || t.lexeme == "unicode") && has(1) && peek(1).kind == TokenKind::StringLit
                && peek(1).span.begin == t.span.end) {
                advance();
                advance();
                return makeExpr(start, LiteralExpr{LiteralKind::String, compactText(start, m_pos)});
            }
            advance();
            return makeExpr(start, IdentifierExpr{t.lexeme});
        case TokenKind::NumberLit: {
            advance();
            std::string text = t.lexeme;
            LiteralKind kind = isHexAddress(text) ? LiteralKind::HexAddress : LiteralKind::Number;
            if (atIdentifier()
                && std::find(kNumberUnits.begin(), kNumberUnits.end(), peek().lexeme) != kNumberUnits.end())
                text += " " + advance().lexeme;
            return makeExpr(start, LiteralExpr{kind, std::move(text)});
        }
        case TokenKind::StringLit: {
            std::string text;
            while (has() && peek().kind == TokenKind::StringLit)
                text += advance().lexeme;
            return makeExpr(start, LiteralExpr{LiteralKind::String, std::move(text)});
        }
        case TokenKind::Keyword:
            if (t.lexeme == "true" || t.lexeme == "false") {
                advance();
                return makeExpr(start, LiteralExpr{LiteralKind::Bool, t.lexeme});
            }
            if (t.lexeme == "new") {
                advance();
                std::size_t typeStart = m_pos;
                std::string typeName = parseTypeNameForNew();
                auto operand = makeExpr(typeStart, IdentifierExpr{std::move(typeName)});
                return makeExpr(start, UnaryExpr{"new", std::move(operand), false});
            }
            if (isElementaryTypeName(t.lexeme) || t.lexeme == "payable") {
                advance();
                std::string name = t.lexeme;
                if (name == "address" && atKeyword("payable")) {
                    advance();
                    name += " payable";
                }
                return makeExpr(start, IdentifierExpr{std::move(name)});
            }
            fail("unexpected keyword '" + t.lexeme + "' in expression");
        case TokenKind::Punct:
            if (t.lexeme == "(" || t.lexeme == "[") {
                bool isArray = t.lexeme == "[";
                std::string close = isArray ? "]" : ")";
                advance();
                TupleExpr tuple;
                tuple.isArray = isArray;
                bool sawComma = false;
                if (!atPunct(close)) {
                    while (true) {
                        if (atPunct(",") || atPunct(close))
                            tuple.elements.emplace_back();
                        else
                            tuple.elements.push_back(parseExpression());
                        if (acceptPunct(",")) {
                            sawComma = true;
                            continue;
                        }
                        break;
                    }
                }
                expectPunct(close);
                if (!isArray && !sawComma && tuple.elements.size() == 1 && tuple.elements[0])
                    return std::move(tuple.elements[0]);
                return makeExpr(start, std::move(tuple));
            }
            break;
        default:
            break;
        }
        fail("expected expression" + found());
    }

    // `new T[](n)` / `new Foo{value: v}(x)`: the type ends before the call.
    std::string parseTypeNameForNew()
    {
        std::string text;
        if (has() && peek().kind == TokenKind::Keyword && isElementaryTypeName(peek().lexeme))
            text = advance().lexeme;
        else
            text = parseQualifiedName();
        while (atPunct("[")) {
            std::size_t s = m_pos;
            advance();
            if (!atPunct("]"))
                parseExpression();
            expectPunct("]");
            text += compactText(s, m_pos);
        }
        return text;
    }

    std::span<const Token> m_tokens;
    const SourceFile& m_file;
    std::size_t m_pos = 0;
    std::vector<ParseError> m_errors;
};

std::vector<ParseError> lexErrorsAsParseErrors(const TokenStream& stream)
{
    std::vector<ParseError> out;
    for (const auto& e : stream.errors) {
        std::string message = e.kind == LexErrorKind::UnterminatedString ? "unterminated string literal"
                                                                          : "unterminated block comment";
        out.push_back({ParseSeverity::Error, std::move(message), e.span});
    }
    return out;
}

} // namespace

SourceUnit parse(std::span<const Token> tokens, const SourceFile& file)
{
    return Parser(tokens, file).parseUnit();
}

SourceUnit parseFile(const SourceFile& file)
{
    TokenStream stream = tokenize(file);
    SourceUnit unit = parse(stream.tokens, file);
    auto lexErrors = lexErrorsAsParseErrors(stream);
    unit.parseErrors.insert(unit.parseErrors.end(), lexErrors.begin(), lexErrors.end());
    std::stable_sort(unit.parseErrors.begin(), unit.parseErrors.end(),
                     [](const ParseError& a, const ParseError& b) { return a.span.begin < b.span.begin; });
    return unit;
}

StatementParse parseStatement(const SourceFile& fragment)
{
    TokenStream stream = tokenize(fragment);
    StatementParse out = Parser(stream.tokens, fragment).parseSingleStatement();
    auto lexErrors = lexErrorsAsParseErrors(stream);
    out.errors.insert(out.errors.end(), lexErrors.begin(), lexErrors.end());
    return out;
}

} // namespace evlint
