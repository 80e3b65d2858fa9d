#include <evlint/line_diff.hpp>

#include <stdexcept>
#include <unordered_map>

namespace evlint {

namespace {

/// Linear-space divide and conquer over the middle snake. Marks deleted
/// indices of `a` and inserted indices of `b`.
class Myers {
public:
    Myers(const std::vector<int>& a, const std::vector<int>& b, std::vector<bool>& deleted, std::vector<bool>& inserted)
        : m_a(a), m_b(b), m_deleted(deleted), m_inserted(inserted)
    {
    }

    void run() { solve(0, m_a.size(), 0, m_b.size()); }

private:
    void solve(std::size_t aLo, std::size_t aHi, std::size_t bLo, std::size_t bHi)
    {
        while (aLo < aHi && bLo < bHi && m_a[aLo] == m_b[bLo]) {
            ++aLo;
            ++bLo;
        }
        while (aLo < aHi && bLo < bHi && m_a[aHi - 1] == m_b[bHi - 1]) {
            --aHi;
            --bHi;
        }
        if (aLo == aHi) {
            for (std::size_t j = bLo; j < bHi; ++j)
                m_inserted[j] = true;
            return;
        }
        if (bLo == bHi) {
            for (std::size_t i = aLo; i < aHi; ++i)
                m_deleted[i] = true;
            return;
        }
        auto [x, y, u, v] = middleSnake(aLo, aHi, bLo, bHi);
        solve(aLo, x, bLo, y);
        solve(u, aHi, v, bHi);
    }

    struct Snake {
        std::size_t x, y, u, v;
    };

    Snake middleSnake(std::size_t aLo, std::size_t aHi, std::size_t bLo, std::size_t bHi) const
    {
        const long n = static_cast<long>(aHi - aLo);
        const long m = static_cast<long>(bHi - bLo);
        const long delta = n - m;
        const bool odd = (delta & 1) != 0;
        const long maxD = (n + m + 1) / 2;
        const long offset = maxD + 1;
        std::vector<long> fwd(static_cast<std::size_t>(2 * offset + 1), 0);
        std::vector<long> bwd(static_cast<std::size_t>(2 * offset + 1), 0);
        auto F = [&](long k) -> long& { return fwd[static_cast<std::size_t>(k + offset)]; };
        auto B = [&](long k) -> long& { return bwd[static_cast<std::size_t>(k + offset)]; };
        auto A = [&](long i) { return m_a[aLo + static_cast<std::size_t>(i)]; };
        auto Bs = [&](long j) { return m_b[bLo + static_cast<std::size_t>(j)]; };

        for (long d = 0; d <= maxD; ++d) {
            for (long k = -d; k <= d; k += 2) {
                long x = (k == -d || (k != d && F(k - 1) < F(k + 1))) ? F(k + 1) : F(k - 1) + 1;
                long y = x - k;
                long x0 = x;
                long y0 = y;
                while (x < n && y < m && A(x) == Bs(y)) {
                    ++x;
                    ++y;
                }
                F(k) = x;
                // Backward diagonal c = delta - k counts steps from the ends.
                long c = delta - k;
                if (odd && c >= -(d - 1) && c <= d - 1 && F(k) + B(c) >= n)
                    return {aLo + static_cast<std::size_t>(x0), bLo + static_cast<std::size_t>(y0),
                            aLo + static_cast<std::size_t>(x), bLo + static_cast<std::size_t>(y)};
            }
            for (long k = -d; k <= d; k += 2) {
                long x = (k == -d || (k != d && B(k - 1) < B(k + 1))) ? B(k + 1) : B(k - 1) + 1;
                long y = x - k;
                long x0 = x;
                long y0 = y;
                while (x < n && y < m && A(n - x - 1) == Bs(m - y - 1)) {
                    ++x;
                    ++y;
                }
                B(k) = x;
                long c = delta - k;
                if (!odd && c >= -d && c <= d && B(k) + F(c) >= n)
                    return {aLo + static_cast<std::size_t>(n - x), bLo + static_cast<std::size_t>(m - y),
                            aLo + static_cast<std::size_t>(n - x0), bLo + static_cast<std::size_t>(m - y0)};
            }
        }
        throw std::logic_error("middle snake not found");
    }

    const std::vector<int>& m_a;
    const std::vector<int>& m_b;
    std::vector<bool>& m_deleted;
    std::vector<bool>& m_inserted;
};

} // namespace

LineDiff diffLines(const std::vector<std::string>& before, const std::vector<std::string>& after)
{
    std::unordered_map<std::string, int> ids;
    auto intern = [&](const std::vector<std::string>& lines) {
        std::vector<int> out;
        out.reserve(lines.size());
        for (const auto& l : lines)
            out.push_back(ids.emplace(l, static_cast<int>(ids.size())).first->second);
        return out;
    };
    auto a = intern(before);
    auto b = intern(after);
    std::vector<bool> deleted(a.size(), false);
    std::vector<bool> inserted(b.size(), false);
    Myers(a, b, deleted, inserted).run();

    LineDiff diff;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size() && deleted[i]) {
            diff.ops.push_back({DiffOpKind::Delete, i + 1, std::nullopt, before[i]});
            ++i;
        } else if (j < b.size() && inserted[j]) {
            diff.ops.push_back({DiffOpKind::Add, std::nullopt, j + 1, after[j]});
            ++j;
        } else {
            diff.ops.push_back({DiffOpKind::Keep, i + 1, j + 1, before[i]});
            ++i;
            ++j;
        }
    }
    return diff;
}

LineDiff diffFiles(const SourceFile* before, const SourceFile* after)
{
    return diffLines(before ? splitLines(before->text()) : std::vector<std::string>{},
                     after ? splitLines(after->text()) : std::vector<std::string>{});
}

std::vector<Hunk> hunks(const LineDiff& diff)
{
    std::vector<Hunk> out;
    for (std::size_t i = 0; i < diff.ops.size();) {
        if (diff.ops[i].kind == DiffOpKind::Keep) {
            ++i;
            continue;
        }
        Hunk h;
        h.begin = i;
        while (i < diff.ops.size() && diff.ops[i].kind != DiffOpKind::Keep)
            ++i;
        h.end = i;
        out.push_back(h);
    }
    return out;
}

std::vector<std::string> replay(const LineDiff& diff, const std::vector<std::string>& before)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    for (const auto& op : diff.ops) {
        switch (op.kind) {
        case DiffOpKind::Keep:
            if (i >= before.size() || before[i] != op.text)
                throw std::invalid_argument("diff does not apply: kept line differs");
            out.push_back(before[i++]);
            break;
        case DiffOpKind::Delete:
            if (i >= before.size() || before[i] != op.text)
                throw std::invalid_argument("diff does not apply: deleted line differs");
            ++i;
            break;
        case DiffOpKind::Add:
            out.push_back(op.text);
            break;
        }
    }
    if (i != before.size())
        throw std::invalid_argument("diff does not consume the whole input");
    return out;
}

} // namespace evlint
