#include <doctest.h>

#include "../support/fixtures.hpp"

#include <evlint/lexer.hpp>
#include <evlint/loc.hpp>
#include <evlint/parser.hpp>
#include <evlint/regex_emit.hpp>

#include <algorithm>

using namespace evlint;
using evlint::testing::dumpUnit;
using evlint::testing::fixtureFiles;
using evlint::testing::loadFixture;

namespace {

SourceFile src(std::string text)
{
    return SourceFile("inline.sol", std::move(text));
}

/// The text between consecutive tokens is whitespace or lies in a comment.
void checkReconstruction(const SourceFile& f)
{
    auto ts = tokenize(f);
    std::size_t pos = 0;
    for (const auto& t : ts.tokens) {
        REQUIRE(t.span.begin >= pos);
        for (std::size_t i = pos; i < t.span.begin; ++i) {
            char c = f.text()[i];
            bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
            CHECK((ws || ts.inCommentOrString(i)));
        }
        CHECK(f.slice(t.span) == t.lexeme);
        pos = t.span.end;
    }
}

} // namespace

TEST_CASE("source file line index")
{
    SourceFile f("a.sol", "ab\ncd\n");
    CHECK(f.lineCount() == 2);
    CHECK(f.lineStarts()[0] == 0);
    CHECK(f.lineText(2) == "cd");
    CHECK(f.positionOf(4).line == 2);
    CHECK(f.positionOf(4).column == 2);
    CHECK(SourceFile("e.sol", "").lineCount() == 0);
    CHECK(SourceFile("b.sol", "\xEF\xBB\xBFx").text() == "x");
    SourceFile crlf("c.sol", "a\r\nb");
    CHECK(crlf.lineText(1) == "a");
    CHECK(crlf.lineText(2) == "b");
}

TEST_CASE("line starts strictly increase")
{
    SourceFile f("a.sol", "\n\nx\n\ny");
    auto ls = f.lineStarts();
    CHECK(ls[0] == 0);
    for (std::size_t i = 1; i < ls.size(); ++i)
        CHECK(ls[i] > ls[i - 1]);
    CHECK(ls.back() <= f.text().size());
}

TEST_CASE("tokenize empty input")
{
    auto ts = tokenize(src(""));
    CHECK(ts.tokens.empty());
    CHECK(ts.errors.empty());
}

TEST_CASE("tokenize emit statement")
{
    auto ts = tokenize(src("emit Deposit(msg.sender, _id, msg.value);"));
    // emit Deposit ( msg . sender , _id , msg . value ) ;
    REQUIRE(ts.tokens.size() == 14);
    CHECK(ts.tokens[0].is(TokenKind::Keyword, "emit"));
    CHECK(ts.tokens[1].is(TokenKind::Identifier, "Deposit"));
    CHECK(ts.tokens[2].isPunct("("));
    CHECK(ts.tokens[13].isPunct(";"));
}

TEST_CASE("tokenize drops comments")
{
    auto ts = tokenize(src("uint x = 0x2A; // hi"));
    REQUIRE(ts.tokens.size() == 5);
    CHECK(ts.tokens[0].is(TokenKind::Keyword, "uint"));
    CHECK(ts.tokens[1].is(TokenKind::Identifier, "x"));
    CHECK(ts.tokens[2].isOperator("="));
    CHECK(ts.tokens[3].is(TokenKind::NumberLit, "0x2A"));
    CHECK(ts.tokens[4].isPunct(";"));
    CHECK(ts.comments.size() == 1);
}

TEST_CASE("token spans carry line and column")
{
    auto ts = tokenize(src("a\n  bb"));
    REQUIRE(ts.tokens.size() == 2);
    CHECK(ts.tokens[1].span.startLine == 2);
    CHECK(ts.tokens[1].span.startCol == 3);
    CHECK(ts.tokens[1].span.endCol == 5);
}

TEST_CASE("operators use longest match")
{
    auto ts = tokenize(src("a >>= b ** c => d != e"));
    std::vector<std::string> ops;
    for (const auto& t : ts.tokens)
        if (t.kind == TokenKind::Operator)
            ops.push_back(t.lexeme);
    CHECK(ops == std::vector<std::string>{">>=", "**", "=>", "!="});
}

TEST_CASE("string literals and escapes")
{
    auto ts = tokenize(src(R"(x = "a\"b" + 'c\'d';)"));
    REQUIRE(ts.tokens.size() == 6);
    CHECK(ts.tokens[2].kind == TokenKind::StringLit);
    CHECK(ts.tokens[2].lexeme == R"("a\"b")");
    CHECK(ts.tokens[4].lexeme == R"('c\'d')");
}

TEST_CASE("unterminated string resumes at next line")
{
    auto ts = tokenize(src("x = \"abc\ny = 1;"));
    REQUIRE(ts.errors.size() == 1);
    CHECK(ts.errors[0].kind == LexErrorKind::UnterminatedString);
    CHECK(ts.errors[0].span.startLine == 1);
    auto it = std::find_if(ts.tokens.begin(), ts.tokens.end(), [](const Token& t) { return t.lexeme == "y"; });
    REQUIRE(it != ts.tokens.end());
    CHECK(it->span.startLine == 2);
}

TEST_CASE("unterminated block comment resumes at next line")
{
    auto ts = tokenize(src("a /* open\nb;"));
    REQUIRE(ts.errors.size() == 1);
    CHECK(ts.errors[0].kind == LexErrorKind::UnterminatedComment);
    CHECK(ts.tokens.back().lexeme == ";");
}

TEST_CASE("lexemes and skipped text reconstruct the input")
{
    checkReconstruction(src("uint x = 0x2A; // hi\n/* c */ emit A(\"s\", 1);\n"));
    for (const auto& path : fixtureFiles("corpus"))
        checkReconstruction(loadSourceFile(path));
}

TEST_CASE("parse event definition and use")
{
    auto f = loadFixture("frontend/client_receipt.sol");
    auto unit = parseFile(f);
    CHECK(unit.parseErrors.empty());
    REQUIRE(unit.contracts.size() == 1);
    const auto& c = unit.contracts[0];
    REQUIRE(c.events.size() == 1);
    const auto& ev = c.events[0];
    CHECK(ev.name == "Deposit");
    REQUIRE(ev.params.size() == 3);
    CHECK(*ev.params[0].name == "_from");
    CHECK(ev.params[0].indexed);
    CHECK(*ev.params[1].name == "_id");
    CHECK(ev.params[1].indexed);
    CHECK(*ev.params[2].name == "_value");
    CHECK_FALSE(ev.params[2].indexed);
    REQUIRE(c.functions.size() == 1);
    auto emits = collectEmits(c.functions[0]);
    REQUIRE(emits.size() == 1);
    const auto* em = emits[0]->as<EmitStmt>();
    CHECK(em->eventName == "Deposit");
    REQUIRE(em->args.size() == 3);
    const auto* sender = em->args[0]->as<MemberAccessExpr>();
    REQUIRE(sender);
    CHECK(sender->member == "sender");
    CHECK(sender->base->as<IdentifierExpr>()->name == "msg");
}

TEST_CASE("empty contract")
{
    auto unit = parseFile(src("contract C {}"));
    REQUIRE(unit.contracts.size() == 1);
    CHECK(unit.contracts[0].name == "C");
    CHECK(unit.contracts[0].functions.empty());
    CHECK(unit.parseErrors.empty());
}

TEST_CASE("contract kinds and bases")
{
    auto unit = parseFile(src("interface I { function f() external; }\n"
                              "library L {}\n"
                              "abstract contract A is I {}\n"
                              "contract B is A, I { constructor() {} }"));
    REQUIRE(unit.contracts.size() == 4);
    CHECK(unit.contracts[0].kind == ContractKind::Interface);
    CHECK_FALSE(unit.contracts[0].functions[0].body);
    CHECK(unit.contracts[1].kind == ContractKind::Library);
    CHECK(unit.contracts[2].kind == ContractKind::Abstract);
    CHECK(unit.contracts[3].bases == std::vector<std::string>{"A", "I"});
    CHECK(unit.contracts[3].functions[0].kind == FunctionKind::Constructor);
    CHECK(unit.parseErrors.empty());
}

TEST_CASE("inline assembly becomes unparsed")
{
    auto unit = parseFile(src("contract C {\n"
                              "  event E(uint a);\n"
                              "  function f() public {\n"
                              "    uint s;\n"
                              "    assembly { s := sload(0) }\n"
                              "    emit E(s);\n"
                              "  }\n"
                              "}\n"));
    CHECK_FALSE(unit.hasFatalErrors());
    const auto& body = unit.contracts.at(0).functions.at(0).body->as<BlockStmt>()->stmts;
    REQUIRE(body.size() == 3);
    CHECK(body[1]->as<UnparsedStmt>());
    CHECK(body[1]->as<UnparsedStmt>()->rawText.starts_with("assembly"));
    CHECK(body[2]->as<EmitStmt>());
}

TEST_CASE("garbage input yields errors and no contracts")
{
    auto unit = parseFile(src("%%% ??? }}} {{ ;; 12 34 \"oops"));
    CHECK(unit.contracts.empty());
    CHECK_FALSE(unit.parseErrors.empty());
    CHECK(unit.hasFatalErrors());
}

TEST_CASE("too many indexed parameters is a warning")
{
    auto unit = parseFile(src("contract C { event E(uint indexed a, uint indexed b, uint indexed c, uint indexed d); }"));
    REQUIRE(unit.parseErrors.size() == 1);
    CHECK(unit.parseErrors[0].severity == ParseSeverity::Warning);
    CHECK_FALSE(unit.hasFatalErrors());
    CHECK(unit.contracts[0].events.size() == 1);
}

TEST_CASE("broken statement recovers at semicolon")
{
    auto unit = parseFile(src("contract C {\n"
                              "  event E(uint a);\n"
                              "  function f(uint a) public {\n"
                              "    a = = 3;\n"
                              "    emit E(a);\n"
                              "  }\n"
                              "  function g() public {}\n"
                              "}\n"));
    CHECK(unit.hasFatalErrors());
    REQUIRE(unit.contracts.size() == 1);
    REQUIRE(unit.contracts[0].functions.size() == 2);
    const auto& body = unit.contracts[0].functions[0].body->as<BlockStmt>()->stmts;
    REQUIRE(body.size() == 2);
    CHECK(body[0]->as<UnparsedStmt>());
    CHECK(body[1]->as<EmitStmt>());
}

TEST_CASE("expression forms")
{
    auto parsed = parseStatement(src("x = a.b[i](1, y).c + -z * 2 ** 3 ** 2;"));
    REQUIRE(parsed.stmt);
    CHECK(parsed.errors.empty());
    CHECK(dump(*parsed.stmt)
          == "(expr (assign= (id x) (+ (member (call (index (member (id a) b) (id i)) {} [(lit 0 1) (id y)]) c) "
             "(* (pre- (id z)) (** (lit 0 2) (** (lit 0 3) (lit 0 2)))))))");

    auto opts = parseStatement(src("to.call{value: amt}(\"\");"));
    REQUIRE(opts.stmt);
    CHECK(opts.errors.empty());
    const auto* call = opts.stmt->as<ExprStmt>()->expr->as<CallExpr>();
    REQUIRE(call);
    CHECK(call->options.size() == 1);
    CHECK(call->args.size() == 1);

    auto addr = parseStatement(src("owner = 0x5B38Da6a701c568545dCfcB03FcB875f56beddC4;"));
    const auto* lit = addr.stmt->as<ExprStmt>()->expr->as<AssignmentExpr>()->rhs->as<LiteralExpr>();
    REQUIRE(lit);
    CHECK(lit->kind == LiteralKind::HexAddress);
}

TEST_CASE("local declarations")
{
    auto parsed = parseStatement(src("uint256[] memory xs = new uint256[](3);"));
    REQUIRE(parsed.stmt);
    const auto* d = parsed.stmt->as<LocalVarDeclStmt>();
    REQUIRE(d);
    CHECK(d->vars[0]->typeName == "uint256[]");
    CHECK(d->vars[0]->location == DataLocation::Memory);

    auto tuple = parseStatement(src("(uint a, , bool b) = f();"));
    const auto* t = tuple.stmt->as<LocalVarDeclStmt>();
    REQUIRE(t);
    REQUIRE(t->vars.size() == 3);
    CHECK_FALSE(t->vars[1]);
    CHECK(t->vars[2]->name == "b");

    auto map = parseStatement(src("mapping(address => uint) storage m = balances;"));
    CHECK(map.stmt->as<LocalVarDeclStmt>()->vars[0]->typeName == "mapping(address=>uint)");
}

TEST_CASE("loc counting")
{
    CHECK(countLoc(src("a;\nb;\n// comment\n\nc;\n")).codeLines == 3);
    auto mixed = countLoc(src("uint a; // note\n"));
    CHECK(mixed.codeLines == 1);
    CHECK(mixed.commentLines == 0);
    auto block = countLoc(src("a;\n/* one\n\n three */\nb;\n"));
    CHECK(block.commentLines == 3);
    CHECK(block.codeLines == 2);
    auto str = countLoc(src("s = \"/* not a comment\";\nt;\n"));
    CHECK(str.codeLines == 2);
    CHECK(countLoc(src("")).totalLines == 0);
}

TEST_CASE("loc additivity and prefix independence")
{
    for (const auto& path : fixtureFiles("corpus")) {
        auto f = loadSourceFile(path);
        auto kinds = classifyLines(f);
        auto stats = countLoc(f);
        CHECK(stats == tally(kinds));
        CHECK(stats.codeLines + stats.commentLines + stats.blankLines == stats.totalLines);
        CHECK(stats.totalLines == f.lineCount());
        for (std::size_t cut = 1; cut < f.lineCount(); cut += 5) {
            SourceFile prefix(f.path(), std::string(f.text().substr(0, f.lineStarts()[cut])));
            auto pk = classifyLines(prefix);
            REQUIRE(pk.size() == cut);
            CHECK(std::equal(pk.begin(), pk.end(), kinds.begin()));
        }
    }
}

TEST_CASE("regex extraction")
{
    auto m = extractEmitsRegex(src(" emit Deposit(msg.sender, _id, msg.value);"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].eventName == "Deposit");
    CHECK(m[0].rawArgs == "msg.sender, _id, msg.value");
    CHECK_FALSE(m[0].inCommentOrString);

    auto c = extractEmitsRegex(src("x;\n// emit Old(x);\n"));
    REQUIRE(c.size() == 1);
    CHECK(c[0].eventName == "Old");
    CHECK(c[0].inCommentOrString);

    CHECK(extractEmitsRegex(src("contract C { function f() public {} }")).empty());
}

TEST_CASE("regex pattern text")
{
    CHECK(kEmitPattern == R"(\s+emit\s+(\w+)\s*\(([\s\S]*?)\)\s*)");
    // The pattern needs leading whitespace and stops at the first ')'.
    CHECK(extractEmitsRegex(src("emit A(x);")).empty());
    auto nested = extractEmitsRegex(src("  emit A(f(x), y);"));
    REQUIRE(nested.size() == 1);
    CHECK(nested[0].rawArgs == "f(x");
}

TEST_CASE("regex and AST agree on the corpus")
{
    auto files = fixtureFiles("corpus");
    REQUIRE(files.size() == 50);
    for (const auto& path : files) {
        auto f = loadSourceFile(path);
        auto unit = parseFile(f);
        auto matches = extractEmitsRegex(f);
        CAPTURE(path.string());
        CHECK(unit.parseErrors.empty());
        CHECK(std::none_of(matches.begin(), matches.end(), [](const auto& m) { return m.inCommentOrString; }));
        CHECK(matches.size() == countEmitStatements(unit));
    }
}

TEST_CASE("span soundness: statements reparse to equal nodes")
{
    std::size_t checked = 0;
    for (const auto& path : fixtureFiles("corpus")) {
        auto f = loadSourceFile(path);
        auto unit = parseFile(f);
        forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef*) {
            if (!fn.body)
                return;
            forEachStmt(*fn.body, [&](const Stmt& s) {
                bool selfContained = s.as<EmitStmt>() || s.as<ExprStmt>() || s.as<ReturnStmt>()
                                  || s.as<LocalVarDeclStmt>() || s.as<IfStmt>() || s.as<ForStmt>()
                                  || s.as<WhileStmt>() || s.as<BlockStmt>();
                if (!selfContained)
                    return;
                SourceFile fragment("fragment.sol", std::string(f.slice(s.span)));
                auto again = parseStatement(fragment);
                REQUIRE(again.stmt);
                CHECK(again.errors.empty());
                CHECK(dump(*again.stmt) == dump(s));
                ++checked;
            });
        });
    }
    CHECK(checked > 200);
}

TEST_CASE("child spans nest within parents")
{
    for (const auto& path : fixtureFiles("corpus")) {
        auto f = loadSourceFile(path);
        auto unit = parseFile(f);
        for (const auto& c : unit.contracts)
            for (const auto& fn : c.functions) {
                CHECK(c.span.contains(fn.span));
                if (!fn.body)
                    continue;
                CHECK(fn.span.contains(fn.body->span));
                forEachStmt(*fn.body, [&](const Stmt& s) {
                    CHECK(fn.body->span.contains(s.span));
                    forEachOwnExpr(s, [&](const Expr& e) {
                        CHECK(s.span.contains(e.span));
                        forEachExpr(&e, [&](const Expr& inner) { CHECK(e.span.contains(inner.span)); });
                    });
                });
            }
    }
}

TEST_CASE("determinism")
{
    for (const auto& path : fixtureFiles("corpus")) {
        auto f = loadSourceFile(path);
        CHECK(dumpUnit(parseFile(f)) == dumpUnit(parseFile(f)));
        CHECK(countLoc(f) == countLoc(f));
        auto a = extractEmitsRegex(f);
        auto b = extractEmitsRegex(f);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK((a[i].span == b[i].span && a[i].rawArgs == b[i].rawArgs));
    }
}
