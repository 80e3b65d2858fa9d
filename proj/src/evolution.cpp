#include <evlint/evolution.hpp>

#include <evlint/lexer.hpp>
#include <evlint/loc.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace evlint {

std::string_view toString(ChangeCategory category)
{
    switch (category) {
    case ChangeCategory::ParameterChange: return "ParameterChange";
    case ChangeCategory::Addition: return "Addition";
    case ChangeCategory::Deletion: return "Deletion";
    case ChangeCategory::Move: return "Move";
    case ChangeCategory::Replacement: return "Replacement";
    case ChangeCategory::Compound: return "Compound";
    }
    return "?";
}

std::string_view toString(Independence independence)
{
    switch (independence) {
    case Independence::AbsoluteIndependent: return "AbsoluteIndependent";
    case Independence::HeuristicIndependent: return "HeuristicIndependent";
    case Independence::Dependent: return "Dependent";
    }
    return "?";
}

void Revision::validate() const
{
    for (const auto& p : filePairs)
        if (!p.before && !p.after)
            throw std::invalid_argument("revision " + id + ": pair " + p.path + " has neither side");
}

namespace {

std::string stripSpace(std::string_view text)
{
    std::string out;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

bool isLiteral(const Token& t)
{
    return t.kind == TokenKind::NumberLit || t.kind == TokenKind::StringLit || t.isKeyword("true") ||
           t.isKeyword("false");
}

/// Reads `a.b.c` starting at an identifier; returns the chain and advances `i`
/// past it.
std::string readChain(const std::vector<Token>& toks, std::size_t& i, std::size_t end)
{
    std::string chain = toks[i].lexeme;
    ++i;
    while (i + 1 < end && toks[i].isPunct(".") && toks[i + 1].kind == TokenKind::Identifier) {
        chain += '.';
        chain += toks[i + 1].lexeme;
        i += 2;
    }
    return chain;
}

/// One regex-detected emit with its full statement extent.
struct EmitSite {
    RegexEmitMatch match;
    std::string normArgs;
    std::vector<std::string> argTokens;
    std::size_t firstLine = 0;
    std::size_t lastLine = 0;
    std::size_t extentBegin = 0;
    std::size_t extentEnd = 0;
};

struct Side {
    const SourceFile* file = nullptr;
    TokenStream toks;
    std::vector<LineKind> kinds;
    std::vector<EmitSite> sites;
    /// Per line (index 0 is line 1): changed in the diff and the hunk it belongs to.
    std::vector<bool> changed;
    std::vector<long> hunkOf;

    bool inEmitExtent(std::size_t offset) const
    {
        for (const auto& s : sites)
            if (s.extentBegin <= offset && offset < s.extentEnd)
                return true;
        return false;
    }

    /// First changed line of a site, or 0 when the site is untouched.
    std::size_t firstChangedLine(const EmitSite& s) const
    {
        for (std::size_t l = s.firstLine; l <= s.lastLine; ++l)
            if (l >= 1 && l <= changed.size() && changed[l - 1])
                return l;
        return 0;
    }
};

void collectArgTokens(const std::vector<Token>& toks, std::size_t begin, std::size_t end,
                      std::vector<std::string>& out)
{
    for (std::size_t i = begin; i < end;) {
        const Token& t = toks[i];
        if (t.kind == TokenKind::Identifier) {
            out.push_back(readChain(toks, i, end));
        } else {
            if (isLiteral(t))
                out.push_back(t.lexeme);
            ++i;
        }
    }
}

std::vector<EmitSite> findSites(const SourceFile& file, const TokenStream& ts)
{
    std::vector<EmitSite> out;
    const auto& toks = ts.tokens;
    for (auto& m : extractEmitsRegex(file, ts)) {
        if (m.inCommentOrString)
            continue;
        EmitSite site;
        site.match = m;
        site.firstLine = m.span.startLine;
        site.lastLine = m.span.endLine;
        site.extentBegin = m.span.begin;
        site.extentEnd = m.span.end;
        site.normArgs = stripSpace(m.rawArgs);

        auto it = std::lower_bound(toks.begin(), toks.end(), m.span.begin,
                                   [](const Token& t, std::size_t off) { return t.span.begin < off; });
        std::size_t i = static_cast<std::size_t>(it - toks.begin());
        if (i + 2 < toks.size() && toks[i].isKeyword("emit") && toks[i + 2].isPunct("(")) {
            std::size_t open = i + 2;
            std::size_t j = open + 1;
            int depth = 1;
            while (j < toks.size() && depth > 0) {
                if (toks[j].isPunct("(") || toks[j].isPunct("[") || toks[j].isPunct("{"))
                    ++depth;
                else if (toks[j].isPunct(")") || toks[j].isPunct("]") || toks[j].isPunct("}"))
                    --depth;
                if (depth > 0)
                    ++j;
            }
            if (j < toks.size()) {
                site.normArgs = stripSpace(file.slice(toks[open].span.end, toks[j].span.begin));
                collectArgTokens(toks, open + 1, j, site.argTokens);
                std::size_t k = j + 1;
                if (k < toks.size() && toks[k].isPunct(";"))
                    site.extentEnd = toks[k].span.end;
                else
                    site.extentEnd = toks[j].span.end;
                site.lastLine = file.positionOf(site.extentEnd == 0 ? 0 : site.extentEnd - 1).line;
            }
        }
        out.push_back(std::move(site));
    }
    return out;
}

struct PairAnalysis {
    const FilePair* pair = nullptr;
    LineDiff diff;
    std::vector<Hunk> hunkList;
    Side before;
    Side after;
    /// Before line -> after-side line number at the same position in the script.
    std::vector<std::size_t> anchor;
};

void initSide(Side& side, const std::optional<SourceFile>& file)
{
    if (!file)
        return;
    side.file = &*file;
    side.toks = tokenize(*file);
    side.kinds = classifyLines(*file);
    side.sites = findSites(*file, side.toks);
    side.changed.assign(file->lineCount(), false);
    side.hunkOf.assign(file->lineCount(), -1);
}

PairAnalysis analyzePair(const FilePair& pair)
{
    PairAnalysis pa;
    pa.pair = &pair;
    initSide(pa.before, pair.before);
    initSide(pa.after, pair.after);
    pa.diff = diffFiles(pa.before.file, pa.after.file);
    pa.hunkList = hunks(pa.diff);
    pa.anchor.assign(pa.before.changed.size() + 1, 0);

    std::size_t afterSeen = 0;
    std::size_t h = 0;
    for (std::size_t i = 0; i < pa.diff.ops.size(); ++i) {
        while (h < pa.hunkList.size() && pa.hunkList[h].end <= i)
            ++h;
        long hunk = (h < pa.hunkList.size() && pa.hunkList[h].begin <= i) ? static_cast<long>(h) : -1;
        const auto& op = pa.diff.ops[i];
        if (op.beforeLine) {
            pa.anchor[*op.beforeLine] = afterSeen + 1;
            if (op.kind == DiffOpKind::Delete) {
                pa.before.changed[*op.beforeLine - 1] = true;
                pa.before.hunkOf[*op.beforeLine - 1] = hunk;
            }
        }
        if (op.afterLine) {
            afterSeen = *op.afterLine;
            if (op.kind == DiffOpKind::Add) {
                pa.after.changed[*op.afterLine - 1] = true;
                pa.after.hunkOf[*op.afterLine - 1] = hunk;
            }
        }
    }
    return pa;
}

std::vector<PairAnalysis> analyzeAll(const Revision& rev)
{
    rev.validate();
    std::vector<PairAnalysis> out;
    out.reserve(rev.filePairs.size());
    for (const auto& p : rev.filePairs)
        out.push_back(analyzePair(p));
    return out;
}

ChurnReport churnOf(const std::vector<PairAnalysis>& pairs)
{
    ChurnReport r;
    for (const auto& pa : pairs) {
        for (const auto& h : pa.hunkList) {
            std::size_t del = 0;
            std::size_t add = 0;
            for (std::size_t i = h.begin; i < h.end; ++i) {
                const auto& op = pa.diff.ops[i];
                if (op.kind == DiffOpKind::Delete && pa.before.kinds[*op.beforeLine - 1] == LineKind::Code)
                    ++del;
                if (op.kind == DiffOpKind::Add && pa.after.kinds[*op.afterLine - 1] == LineKind::Code)
                    ++add;
            }
            r.churnedLoc += std::max(del, add);
        }
        std::map<long, std::pair<std::size_t, std::size_t>> emitsPerHunk;
        for (const auto& s : pa.before.sites)
            if (auto l = pa.before.firstChangedLine(s))
                ++emitsPerHunk[pa.before.hunkOf[l - 1]].first;
        for (const auto& s : pa.after.sites)
            if (auto l = pa.after.firstChangedLine(s))
                ++emitsPerHunk[pa.after.hunkOf[l - 1]].second;
        for (const auto& [h, counts] : emitsPerHunk)
            r.churnedEmits += std::max(counts.first, counts.second);

        const Side& total = pa.after.file ? pa.after : pa.before;
        r.totalLoc += static_cast<std::size_t>(std::count(total.kinds.begin(), total.kinds.end(), LineKind::Code));
        r.totalEmits += total.sites.size();
    }
    r.locChurnRate = r.totalLoc ? static_cast<double>(r.churnedLoc) / static_cast<double>(r.totalLoc) : 0.0;
    r.emitChurnRate = r.totalEmits ? static_cast<double>(r.churnedEmits) / static_cast<double>(r.totalEmits) : 0.0;
    return r;
}

/// Removed tokens first, then added ones; multiset difference keeps source order.
std::vector<std::string> symmetricDifference(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<std::string> out;
    auto minus = [&out](const std::vector<std::string>& x, const std::vector<std::string>& y) {
        std::map<std::string, std::size_t> budget;
        for (const auto& t : y)
            ++budget[t];
        for (const auto& t : x) {
            auto it = budget.find(t);
            if (it != budget.end() && it->second > 0)
                --it->second;
            else
                out.push_back(t);
        }
    };
    minus(a, b);
    minus(b, a);
    return out;
}

std::vector<EventUseChange> pairsOf(const std::vector<PairAnalysis>& pairs)
{
    std::vector<EventUseChange> out;
    for (const auto& pa : pairs) {
        std::vector<const EmitSite*> dels;
        std::vector<const EmitSite*> adds;
        std::vector<std::size_t> delLine;
        std::vector<std::size_t> addLine;
        for (const auto& s : pa.before.sites)
            if (auto l = pa.before.firstChangedLine(s)) {
                dels.push_back(&s);
                delLine.push_back(l);
            }
        for (const auto& s : pa.after.sites)
            if (auto l = pa.after.firstChangedLine(s)) {
                adds.push_back(&s);
                addLine.push_back(l);
            }

        std::vector<long> delMatch(dels.size(), -1);
        std::vector<long> addMatch(adds.size(), -1);
        std::vector<ChangeCategory> delCategory(dels.size(), ChangeCategory::Deletion);

        auto runRule = [&](ChangeCategory category, auto accept) {
            std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cands;
            for (std::size_t d = 0; d < dels.size(); ++d) {
                if (delMatch[d] >= 0)
                    continue;
                for (std::size_t a = 0; a < adds.size(); ++a) {
                    if (addMatch[a] >= 0 || !accept(d, a))
                        continue;
                    long dist = static_cast<long>(pa.anchor[dels[d]->firstLine]) - static_cast<long>(adds[a]->firstLine);
                    cands.emplace_back(static_cast<std::size_t>(std::labs(dist)), d, a);
                }
            }
            std::sort(cands.begin(), cands.end());
            for (auto [dist, d, a] : cands) {
                if (delMatch[d] >= 0 || addMatch[a] >= 0)
                    continue;
                delMatch[d] = static_cast<long>(a);
                addMatch[a] = static_cast<long>(d);
                delCategory[d] = category;
            }
        };
        auto sameName = [&](std::size_t d, std::size_t a) { return dels[d]->match.eventName == adds[a]->match.eventName; };
        auto sameArgs = [&](std::size_t d, std::size_t a) { return dels[d]->normArgs == adds[a]->normArgs; };

        runRule(ChangeCategory::Move, [&](auto d, auto a) { return sameName(d, a) && sameArgs(d, a); });
        runRule(ChangeCategory::ParameterChange, [&](auto d, auto a) { return sameName(d, a) && !sameArgs(d, a); });
        runRule(ChangeCategory::Replacement, [&](auto d, auto a) { return !sameName(d, a) && sameArgs(d, a); });
        runRule(ChangeCategory::Compound, [&](auto d, auto a) {
            return !sameName(d, a) && !sameArgs(d, a) &&
                   pa.before.hunkOf[delLine[d] - 1] == pa.after.hunkOf[addLine[a] - 1];
        });

        struct Keyed {
            std::size_t line;
            std::size_t order;
            EventUseChange change;
        };
        std::vector<Keyed> local;
        for (std::size_t d = 0; d < dels.size(); ++d) {
            EventUseChange c;
            c.path = pa.pair->path;
            c.category = delCategory[d];
            c.beforeEmit = dels[d]->match;
            std::size_t line = pa.anchor[dels[d]->firstLine];
            if (delMatch[d] >= 0) {
                const EmitSite* a = adds[static_cast<std::size_t>(delMatch[d])];
                c.afterEmit = a->match;
                line = a->firstLine;
                if (c.category == ChangeCategory::ParameterChange || c.category == ChangeCategory::Compound)
                    c.changedArgTokens = symmetricDifference(dels[d]->argTokens, a->argTokens);
            } else {
                c.changedArgTokens = dels[d]->argTokens;
            }
            local.push_back({line, d, std::move(c)});
        }
        for (std::size_t a = 0; a < adds.size(); ++a) {
            if (addMatch[a] >= 0)
                continue;
            EventUseChange c;
            c.path = pa.pair->path;
            c.category = ChangeCategory::Addition;
            c.afterEmit = adds[a]->match;
            c.changedArgTokens = adds[a]->argTokens;
            local.push_back({adds[a]->firstLine, dels.size() + a, std::move(c)});
        }
        std::stable_sort(local.begin(), local.end(), [](const Keyed& x, const Keyed& y) {
            return std::tie(x.line, x.order) < std::tie(y.line, y.order);
        });
        for (auto& k : local)
            out.push_back(std::move(k.change));
    }
    return out;
}

bool onlyEmitLines(const std::vector<PairAnalysis>& pairs)
{
    for (const auto& pa : pairs) {
        for (const Side* side : {&pa.before, &pa.after}) {
            if (!side->file)
                continue;
            for (const auto& t : side->toks.tokens) {
                if (!side->changed[t.span.startLine - 1])
                    continue;
                if (!side->inEmitExtent(t.span.begin))
                    return false;
            }
        }
    }
    return true;
}

bool isOpeningBracket(const Token& t)
{
    return t.isPunct("(") || t.isPunct("[") || t.isPunct("{");
}

bool isClosingBracket(const Token& t)
{
    return t.isPunct(")") || t.isPunct("]") || t.isPunct("}");
}

/// Index of the bracket matching the opener at `i`, or toks.size().
std::size_t matchForward(const std::vector<Token>& toks, std::size_t i)
{
    int depth = 0;
    for (std::size_t j = i; j < toks.size(); ++j) {
        if (isOpeningBracket(toks[j]))
            ++depth;
        else if (isClosingBracket(toks[j]) && --depth == 0)
            return j;
    }
    return toks.size();
}

/// Index of the bracket matching the closer at `i`, or npos.
std::size_t matchBackward(const std::vector<Token>& toks, std::size_t i)
{
    int depth = 0;
    for (std::size_t j = i + 1; j-- > 0;) {
        if (isClosingBracket(toks[j]))
            ++depth;
        else if (isOpeningBracket(toks[j]) && --depth == 0)
            return j;
    }
    return std::string::npos;
}

/// The root chain of the postfix expression ending at `i` (`s.a[k].b` gives `s.a`).
std::optional<std::string> chainEndingAt(const std::vector<Token>& toks, std::size_t i)
{
    std::size_t j = i;
    std::optional<std::size_t> start;
    while (true) {
        if (toks[j].isPunct("]")) {
            auto open = matchBackward(toks, j);
            if (open == std::string::npos || open == 0)
                break;
            j = open - 1;
            continue;
        }
        if (toks[j].kind != TokenKind::Identifier)
            break;
        start = j;
        if (j >= 2 && toks[j - 1].isPunct(".")) {
            j -= 2;
            continue;
        }
        break;
    }
    if (!start)
        return std::nullopt;
    std::size_t k = *start;
    return readChain(toks, k, toks.size());
}

const std::set<std::string_view> kAssignOps{"=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>=", ">>>="};
const std::set<std::string_view> kDeclKeywords{"function", "event", "modifier", "emit", "error", "catch", "contract",
                                               "interface", "library", "struct"};

/// Names written or passed as call arguments on the eligible lines of one side.
void collectKills(const Side& side, bool wholeFile, std::set<std::string>& kills)
{
    const auto& toks = side.toks.tokens;
    auto eligible = [&](std::size_t i) {
        const Token& t = toks[i];
        if (side.inEmitExtent(t.span.begin))
            return false;
        return wholeFile || side.changed[t.span.startLine - 1];
    };
    auto collectRange = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end;) {
            if (toks[k].kind == TokenKind::Identifier && eligible(k)) {
                std::size_t start = k;
                auto chain = readChain(toks, k, end);
                if (start == begin || !toks[start - 1].isPunct("."))
                    if (k >= end || !toks[k].isOperator(":"))
                        kills.insert(chain);
            } else {
                ++k;
            }
        }
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (!eligible(i))
            continue;
        const Token& t = toks[i];
        if (t.kind == TokenKind::Operator && kAssignOps.count(t.lexeme) && i > 0) {
            if (toks[i - 1].isPunct(")")) {
                auto open = matchBackward(toks, i - 1);
                if (open != std::string::npos)
                    collectRange(open + 1, i - 1);
            } else if (auto c = chainEndingAt(toks, i - 1)) {
                kills.insert(*c);
            }
        } else if (t.isOperator("++") || t.isOperator("--")) {
            if (i + 1 < toks.size() && toks[i + 1].kind == TokenKind::Identifier) {
                std::size_t k = i + 1;
                kills.insert(readChain(toks, k, toks.size()));
            } else if (i > 0) {
                if (auto c = chainEndingAt(toks, i - 1))
                    kills.insert(*c);
            }
        } else if (t.isKeyword("delete")) {
            if (i + 1 < toks.size() && toks[i + 1].kind == TokenKind::Identifier) {
                std::size_t k = i + 1;
                kills.insert(readChain(toks, k, toks.size()));
            }
        } else if (t.isPunct("(") && i > 0) {
            const Token& prev = toks[i - 1];
            bool call = prev.kind == TokenKind::Identifier || prev.isPunct(")") || prev.isPunct("]") ||
                        prev.isPunct("}");
            if (call && prev.kind == TokenKind::Identifier && i >= 2 && toks[i - 2].kind == TokenKind::Keyword &&
                kDeclKeywords.count(toks[i - 2].lexeme))
                call = false;
            if (call) {
                auto close = matchForward(toks, i);
                collectRange(i + 1, close);
            }
        }
    }
}

/// Dotted-path prefix in either direction: `a` relates to `a.b`, not to `ab`.
bool pathRelated(const std::string& x, const std::string& y)
{
    const std::string& shorter = x.size() <= y.size() ? x : y;
    const std::string& longer = x.size() <= y.size() ? y : x;
    if (longer.compare(0, shorter.size(), shorter) != 0)
        return false;
    return longer.size() == shorter.size() || longer[shorter.size()] == '.';
}

bool isIdentifierText(const std::string& t)
{
    if (t.empty() || t == "true" || t == "false")
        return false;
    unsigned char c = static_cast<unsigned char>(t[0]);
    return std::isalpha(c) || c == '_' || c == '$';
}

bool killTest(const std::vector<PairAnalysis>& pairs, const EventUseChange& change, const IndependenceOptions& opts)
{
    std::set<std::string> kills;
    for (const auto& pa : pairs) {
        if (pa.before.file)
            collectKills(pa.before, opts.wholeFileKill, kills);
        if (pa.after.file)
            collectKills(pa.after, opts.wholeFileKill, kills);
    }
    for (const auto& tok : change.changedArgTokens) {
        if (!isIdentifierText(tok))
            continue;
        for (const auto& k : kills)
            if (pathRelated(tok, k))
                return false;
    }
    return true;
}

Independence classify(const std::vector<PairAnalysis>& pairs, bool absolute, const EventUseChange& change,
                      const IndependenceOptions& opts)
{
    if (absolute)
        return Independence::AbsoluteIndependent;
    return killTest(pairs, change, opts) ? Independence::HeuristicIndependent : Independence::Dependent;
}

} // namespace

ChurnReport churn(const Revision& rev)
{
    return churnOf(analyzeAll(rev));
}

std::vector<EventUseChange> pairEmitChanges(const Revision& rev)
{
    return pairsOf(analyzeAll(rev));
}

bool onlyEmitLinesChanged(const Revision& rev)
{
    return onlyEmitLines(analyzeAll(rev));
}

bool passesKillTest(const Revision& rev, const EventUseChange& change, const IndependenceOptions& opts)
{
    return killTest(analyzeAll(rev), change, opts);
}

Independence classifyIndependence(const Revision& rev, const EventUseChange& change, const IndependenceOptions& opts)
{
    auto pairs = analyzeAll(rev);
    return classify(pairs, onlyEmitLines(pairs), change, opts);
}

RevisionReport analyzeRevision(const Revision& rev, const IndependenceOptions& opts)
{
    auto pairs = analyzeAll(rev);
    RevisionReport report;
    report.id = rev.id;
    report.message = rev.message;
    report.churn = churnOf(pairs);
    report.changes = pairsOf(pairs);
    bool absolute = onlyEmitLines(pairs);
    for (auto& c : report.changes)
        c.independence = classify(pairs, absolute, c, opts);
    return report;
}

std::vector<RevisionReport> analyzeRevisions(std::span<const Revision> revs, const IndependenceOptions& opts,
                                             Execution exec)
{
    std::vector<RevisionReport> out(revs.size());
    forEachIndex(revs.size(), exec, [&](std::size_t i) { out[i] = analyzeRevision(revs[i], opts); });
    return out;
}

EvolutionSummary summarize(std::span<const RevisionReport> reports)
{
    EvolutionSummary s;
    s.revisions = reports.size();
    for (const auto& r : reports) {
        s.churnedLoc += r.churn.churnedLoc;
        s.totalLoc += r.churn.totalLoc;
        s.churnedEmits += r.churn.churnedEmits;
        s.totalEmits += r.churn.totalEmits;
        for (const auto& c : r.changes) {
            ++s.changes;
            ++s.byCategory[static_cast<std::size_t>(c.category)];
            switch (c.independence) {
            case Independence::AbsoluteIndependent: ++s.absolute; break;
            case Independence::HeuristicIndependent: ++s.heuristic; break;
            case Independence::Dependent: ++s.dependent; break;
            }
        }
    }
    if (s.changes) {
        s.absoluteFraction = static_cast<double>(s.absolute) / static_cast<double>(s.changes);
        s.independentFraction = static_cast<double>(s.absolute + s.heuristic) / static_cast<double>(s.changes);
    }
    return s;
}

} // namespace evlint
