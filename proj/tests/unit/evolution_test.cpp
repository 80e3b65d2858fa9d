#include <doctest.h>

#include "../support/fixtures.hpp"

#include <evlint/evolution.hpp>
#include <evlint/manifest.hpp>

#include <json.hpp>

#include <fstream>
#include <random>

using namespace evlint;

namespace {

std::vector<std::string> lines(std::initializer_list<const char*> l)
{
    return {l.begin(), l.end()};
}

std::size_t lcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<std::vector<std::size_t>> dp(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1 : std::max(dp[i - 1][j], dp[i][j - 1]);
    return dp[a.size()][b.size()];
}

std::size_t count(const LineDiff& d, DiffOpKind k)
{
    return static_cast<std::size_t>(
        std::count_if(d.ops.begin(), d.ops.end(), [k](const DiffOp& op) { return op.kind == k; }));
}

nlohmann::json readManifestJson(const std::string& dir)
{
    std::ifstream in(testing::fixturePath("evolution/" + dir + "/manifest.json"));
    return nlohmann::json::parse(in);
}

Manifest loadFixtureManifest(const std::string& dir)
{
    auto m = loadManifest(testing::fixturePath("evolution/" + dir + "/manifest.json"));
    REQUIRE(m.errors.empty());
    return m;
}

SourceFile src(const char* text)
{
    return SourceFile("C.sol", text);
}

Revision singlePair(const char* before, const char* after)
{
    Revision r;
    r.id = "r";
    r.filePairs.push_back({"C.sol", src(before), src(after)});
    return r;
}

} // namespace

TEST_CASE("identical inputs give only Keep ops")
{
    auto a = lines({"a", "b", "c"});
    auto d = diffLines(a, a);
    CHECK(d.ops.size() == 3);
    CHECK(count(d, DiffOpKind::Keep) == 3);
    CHECK(hunks(d).empty());
}

TEST_CASE("one changed line in ten is an adjacent Delete and Add")
{
    std::vector<std::string> a;
    for (int i = 0; i < 10; ++i)
        a.push_back("line " + std::to_string(i));
    auto b = a;
    b[6] = "changed";
    auto d = diffLines(a, b);
    REQUIRE(d.ops.size() == 11);
    CHECK(d.ops[6].kind == DiffOpKind::Delete);
    CHECK(d.ops[6].beforeLine == 7u);
    CHECK(d.ops[7].kind == DiffOpKind::Add);
    CHECK(d.ops[7].afterLine == 7u);
    CHECK(hunks(d).size() == 1);
}

TEST_CASE("added and deleted files")
{
    SourceFile f("x.sol", "a\nb\n");
    auto added = diffFiles(nullptr, &f);
    CHECK(count(added, DiffOpKind::Add) == 2);
    CHECK(added.ops.size() == 2);
    auto deleted = diffFiles(&f, nullptr);
    CHECK(count(deleted, DiffOpKind::Delete) == 2);
    CHECK(diffFiles(nullptr, nullptr).ops.empty());
}

TEST_CASE("random diffs are minimal, replay, and order deletes first")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(0, 25);
    std::uniform_int_distribution<int> sym(0, 4);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<std::string> a(static_cast<std::size_t>(len(rng)));
        std::vector<std::string> b(static_cast<std::size_t>(len(rng)));
        for (auto& s : a)
            s = std::string(1, static_cast<char>('a' + sym(rng)));
        for (auto& s : b)
            s = std::string(1, static_cast<char>('a' + sym(rng)));
        auto d = diffLines(a, b);
        CHECK(replay(d, a) == b);
        CHECK(count(d, DiffOpKind::Keep) == lcsLength(a, b));
        for (const auto& h : hunks(d)) {
            bool seenAdd = false;
            for (std::size_t i = h.begin; i < h.end; ++i) {
                if (d.ops[i].kind == DiffOpKind::Add)
                    seenAdd = true;
                else
                    CHECK_FALSE(seenAdd);
            }
        }
    }
}

TEST_CASE("replay holds on every fixture pair")
{
    std::size_t pairs = 0;
    for (const char* dir : {"taxonomy", "independence", "churn"}) {
        for (const auto& rev : loadFixtureManifest(dir).revisions) {
            for (const auto& p : rev.filePairs) {
                auto before = p.before ? splitLines(p.before->text()) : std::vector<std::string>{};
                auto after = p.after ? splitLines(p.after->text()) : std::vector<std::string>{};
                CHECK(replay(diffLines(before, after), before) == after);
                ++pairs;
            }
        }
    }
    CHECK(pairs >= 60);
}

TEST_CASE("replay rejects a script for different input")
{
    auto d = diffLines(lines({"a", "b"}), lines({"a", "c"}));
    CHECK_THROWS_AS(replay(d, lines({"x", "b"})), std::invalid_argument);
}

TEST_CASE("churn matches hand counts exactly")
{
    auto m = loadFixtureManifest("churn");
    auto doc = readManifestJson("churn");
    REQUIRE(m.revisions.size() == 10);
    for (std::size_t i = 0; i < m.revisions.size(); ++i) {
        const auto& exp = doc["revisions"][i]["expect"];
        auto c = churn(m.revisions[i]);
        CAPTURE(m.revisions[i].id);
        CHECK(c.churnedLoc == exp["churnedLoc"].get<std::size_t>());
        CHECK(c.totalLoc == exp["totalLoc"].get<std::size_t>());
        CHECK(c.churnedEmits == exp["churnedEmits"].get<std::size_t>());
        CHECK(c.totalEmits == exp["totalEmits"].get<std::size_t>());
        CHECK(c.locChurnRate == static_cast<double>(c.churnedLoc) / static_cast<double>(c.totalLoc));
        CHECK(c.emitChurnRate == static_cast<double>(c.churnedEmits) / static_cast<double>(c.totalEmits));
    }
}

TEST_CASE("churn examples")
{
    auto m = loadFixtureManifest("churn");
    CHECK(churn(m.revisions[0]).locChurnRate == 0.1);
    CHECK(churn(m.revisions[1]).churnedLoc == 0);
    CHECK(churn(m.revisions[2]).emitChurnRate == 0.05);

    Revision empty;
    empty.id = "empty";
    empty.filePairs.push_back({"e.sol", SourceFile("e.sol", ""), SourceFile("e.sol", "")});
    auto c = churn(empty);
    CHECK(c.locChurnRate == 0.0);
    CHECK(c.emitChurnRate == 0.0);
}

TEST_CASE("taxonomy fixture classifies every diff")
{
    auto m = loadFixtureManifest("taxonomy");
    auto doc = readManifestJson("taxonomy");
    REQUIRE(m.revisions.size() == 30);
    std::map<std::string, std::size_t> perCategory;
    for (std::size_t i = 0; i < m.revisions.size(); ++i) {
        const auto& exp = doc["revisions"][i]["expect"];
        auto changes = pairEmitChanges(m.revisions[i]);
        CAPTURE(m.revisions[i].id);
        REQUIRE(changes.size() == 1);
        CHECK(toString(changes[0].category) == exp["category"].get<std::string>());
        if (exp.contains("changedArgTokens"))
            CHECK(changes[0].changedArgTokens == exp["changedArgTokens"].get<std::vector<std::string>>());
        ++perCategory[exp["category"].get<std::string>()];
    }
    for (const auto& [cat, n] : perCategory)
        CHECK(n == 5);
}

TEST_CASE("category invariants hold on all fixture changes")
{
    for (const char* dir : {"taxonomy", "independence", "churn"}) {
        for (const auto& rev : loadFixtureManifest(dir).revisions) {
            for (const auto& c : pairEmitChanges(rev)) {
                CAPTURE(rev.id);
                switch (c.category) {
                case ChangeCategory::Addition:
                    CHECK_FALSE(c.beforeEmit);
                    CHECK(c.afterEmit);
                    break;
                case ChangeCategory::Deletion:
                    CHECK(c.beforeEmit);
                    CHECK_FALSE(c.afterEmit);
                    break;
                default:
                    REQUIRE(c.beforeEmit);
                    REQUIRE(c.afterEmit);
                    bool sameName = c.beforeEmit->eventName == c.afterEmit->eventName;
                    if (c.category == ChangeCategory::ParameterChange || c.category == ChangeCategory::Move)
                        CHECK(sameName);
                    else
                        CHECK_FALSE(sameName);
                    if (c.category == ChangeCategory::Move || c.category == ChangeCategory::Replacement)
                        CHECK(c.changedArgTokens.empty());
                    break;
                }
            }
        }
    }
}

TEST_CASE("paired changes prefer the nearest candidate")
{
    auto rev = singlePair("contract C {\n  function f() public {\n    emit A(x);\n    a = 1;\n    emit A(y);\n  }\n}\n",
                          "contract C {\n  function f() public {\n    emit A(x2);\n    a = 1;\n    emit A(y2);\n  }\n}\n");
    auto changes = pairEmitChanges(rev);
    REQUIRE(changes.size() == 2);
    CHECK(changes[0].changedArgTokens == std::vector<std::string>{"x", "x2"});
    CHECK(changes[1].changedArgTokens == std::vector<std::string>{"y", "y2"});
}

TEST_CASE("emits in comments and strings are not changes")
{
    auto rev = singlePair("contract C {\n  // emit Old(a);\n  string s = \" emit S(b)\";\n}\n",
                          "contract C {\n  // emit New(a);\n  string s = \" emit T(b)\";\n}\n");
    CHECK(pairEmitChanges(rev).empty());
    CHECK(churn(rev).churnedEmits == 0);
}

TEST_CASE("independence labels against the hand-labelled set")
{
    auto m = loadFixtureManifest("independence");
    auto doc = readManifestJson("independence");
    REQUIRE(m.revisions.size() == 20);
    std::size_t absoluteAgree = 0;
    std::size_t heuristicAgree = 0;
    for (std::size_t i = 0; i < m.revisions.size(); ++i) {
        const auto& exp = doc["revisions"][i]["expect"];
        auto report = analyzeRevision(m.revisions[i]);
        CAPTURE(m.revisions[i].id);
        REQUIRE(report.changes.size() == 1);
        const auto& c = report.changes[0];
        bool absolute = c.independence == Independence::AbsoluteIndependent;
        absoluteAgree += absolute == exp["absolute"].get<bool>();
        bool independent = c.independence != Independence::Dependent;
        heuristicAgree += independent == (exp["hand"].get<std::string>() == "independent");
    }
    CHECK(absoluteAgree == 20);
    CHECK(heuristicAgree >= 18);
}

TEST_CASE("absolute independence implies the kill test passes")
{
    for (const char* dir : {"taxonomy", "independence", "churn"}) {
        for (const auto& rev : loadFixtureManifest(dir).revisions) {
            for (const auto& c : analyzeRevision(rev).changes) {
                if (c.independence != Independence::AbsoluteIndependent)
                    continue;
                CAPTURE(rev.id);
                CHECK(passesKillTest(rev, c));
            }
        }
    }
}

TEST_CASE("independence examples")
{
    const char* before = "contract C {\n  uint id1;\n  uint id2;\n  function f() public {\n    id1 = 1;\n"
                         "    emit Send(msg.sender, id1);\n  }\n}\n";
    auto emitOnly = singlePair(before, "contract C {\n  uint id1;\n  uint id2;\n  function f() public {\n    id1 = 1;\n"
                                       "    emit Send(msg.sender, id2);\n  }\n}\n");
    auto c = pairEmitChanges(emitOnly);
    REQUIRE(c.size() == 1);
    CHECK(c[0].category == ChangeCategory::ParameterChange);
    CHECK(c[0].changedArgTokens == std::vector<std::string>{"id1", "id2"});
    CHECK(classifyIndependence(emitOnly, c[0]) == Independence::AbsoluteIndependent);

    auto redefined = singlePair(before, "contract C {\n  uint id1;\n  uint id2;\n  function f() public {\n"
                                        "    id1 = compute();\n    emit Send(msg.sender, id2);\n  }\n}\n");
    c = pairEmitChanges(redefined);
    REQUIRE(c.size() == 1);
    CHECK(classifyIndependence(redefined, c[0]) == Independence::Dependent);

    auto unrelated = singlePair(before, "contract C {\n  uint id1;\n  uint id2;\n  uint other;\n  function f() public {\n"
                                        "    id1 = 1;\n    emit Send(msg.sender, id2);\n  }\n}\n");
    c = pairEmitChanges(unrelated);
    REQUIRE(c.size() == 1);
    CHECK(classifyIndependence(unrelated, c[0]) == Independence::HeuristicIndependent);
}

TEST_CASE("whole-file kill mode widens the scan")
{
    auto m = loadFixtureManifest("independence");
    const Revision* rev = nullptr;
    for (const auto& r : m.revisions)
        if (r.id == "i07_unrelated_change")
            rev = &r;
    REQUIRE(rev);
    auto c = pairEmitChanges(*rev);
    REQUIRE(c.size() == 1);
    CHECK(classifyIndependence(*rev, c[0]) == Independence::HeuristicIndependent);
    CHECK(classifyIndependence(*rev, c[0], {true}) == Independence::Dependent);
}

TEST_CASE("kill scan path prefixes")
{
    auto make = [](const char* extra) {
        std::string after = std::string("contract C {\n  function f() public {\n") + extra +
                            "    emit E(s.a.b);\n  }\n}\n";
        Revision r;
        r.id = "k";
        r.filePairs.push_back({"C.sol", SourceFile("C.sol", "contract C {\n  function f() public {\n    emit E(s);\n  }\n}\n"),
                               SourceFile("C.sol", after)});
        return r;
    };
    auto label = [](const Revision& r) {
        auto c = pairEmitChanges(r);
        REQUIRE(c.size() == 1);
        return classifyIndependence(r, c[0]);
    };
    CHECK(label(make("    s.a = t;\n")) == Independence::Dependent);
    CHECK(label(make("    s.a.b.c = t;\n")) == Independence::Dependent);
    CHECK(label(make("    sa = t;\n")) == Independence::HeuristicIndependent);
    CHECK(label(make("    s.x++;\n")) == Independence::Dependent);
    CHECK(label(make("    delete s;\n")) == Independence::Dependent);
    CHECK(label(make("    g(s.a.b);\n")) == Independence::Dependent);
    CHECK(label(make("    s.a.b.push(1);\n")) == Independence::HeuristicIndependent);
}

TEST_CASE("manifest loading")
{
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "evlint_manifest_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "a.sol") << "contract A {}\n";
    std::ofstream(dir / "m.json")
        << R"({"revisions":[{"id":"ok","message":"m","pairs":[{"path":"A.sol","beforeFile":"a.sol","afterFile":"a.sol"}]},)"
        << R"({"id":"missing","pairs":[{"path":"B.sol","afterFile":"nope.sol"}]}]})";
    auto m = loadManifest(dir / "m.json");
    REQUIRE(m.revisions.size() == 1);
    CHECK(m.revisions[0].id == "ok");
    CHECK(m.revisions[0].message == "m");
    REQUIRE(m.errors.size() == 1);
    CHECK(m.errors[0].revisionId == "missing");

    std::ofstream(dir / "bad.json") << "{not json";
    CHECK_THROWS_AS(loadManifest(dir / "bad.json"), std::invalid_argument);
    std::ofstream(dir / "schema.json") << R"({"revisions":[{"id":"x","pairs":[{"path":"A.sol"}]}]})";
    CHECK_THROWS_AS(loadManifest(dir / "schema.json"), std::invalid_argument);
    CHECK_THROWS_AS(loadManifest(dir / "absent.json"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("parallel revision analysis equals serial")
{
    auto m = loadFixtureManifest("taxonomy");
    auto par = analyzeRevisions(m.revisions, {}, Execution::Parallel);
    auto ser = analyzeRevisions(m.revisions, {}, Execution::Serial);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].id == ser[i].id);
        CHECK(par[i].churn.churnedLoc == ser[i].churn.churnedLoc);
        REQUIRE(par[i].changes.size() == ser[i].changes.size());
        for (std::size_t j = 0; j < par[i].changes.size(); ++j) {
            CHECK(par[i].changes[j].category == ser[i].changes[j].category);
            CHECK(par[i].changes[j].independence == ser[i].changes[j].independence);
        }
    }
    auto s = summarize(par);
    CHECK(s.changes == 30);
    CHECK(s.absolute + s.heuristic + s.dependent == s.changes);
}
