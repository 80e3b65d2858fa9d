#include <evlint/lexer.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace evlint {

namespace {

constexpr std::array kKeywords = {
    "abstract",  "anonymous", "assembly",  "break",    "calldata", "catch",     "constant",
    "constructor", "continue", "contract", "delete",   "do",       "else",      "emit",
    "enum",      "event",     "external",  "fallback", "false",    "for",       "function",
    "if",        "immutable", "import",    "indexed",  "interface", "internal", "is",
    "library",   "mapping",   "memory",    "modifier", "new",      "override",  "payable",
    "pragma",    "private",   "public",    "pure",     "receive",  "return",    "returns",
    "storage",   "struct",    "true",      "try",      "unchecked", "using",    "view",
    "virtual",   "while",
};

// Longest first so that maximal munch works with a linear scan.
constexpr std::array<std::string_view, 37> kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",   "-=",  "*=",  "/=",  "%=", "|=", "&=", "^=", "=>", "<<", ">>", "+",  "-",
    "*",    "/",   "%",   "<",   ">",  "=",  "!",  "&",  "|",  "^",  "~",
};

constexpr std::string_view kPunct = "(){}[];,.";

bool isIdentStart(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isIdentChar(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool allDigits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::size_t utf8Length(unsigned char lead)
{
    if (lead < 0x80)
        return 1;
    if ((lead >> 5) == 0x6)
        return 2;
    if ((lead >> 4) == 0xE)
        return 3;
    if ((lead >> 3) == 0x1E)
        return 4;
    return 1;
}

class Lexer {
public:
    explicit Lexer(const SourceFile& file) : m_file(file), m_text(file.text()) {}

    TokenStream run()
    {
        while (m_pos < m_text.size()) {
            char c = m_text[m_pos];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++m_pos;
            } else if (c == '/' && peek(1) == '/') {
                lineComment();
            } else if (c == '/' && peek(1) == '*') {
                blockComment();
            } else if (c == '"' || c == '\'') {
                string();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                number();
            } else if (isIdentStart(c)) {
                word();
            } else if (kPunct.find(c) != std::string_view::npos) {
                push(TokenKind::Punct, m_pos, m_pos + 1);
            } else if (c == '?' || c == ':') {
                push(TokenKind::Operator, m_pos, m_pos + 1);
            } else if (!operatorToken()) {
                // Unknown byte (or UTF-8 sequence): surface it so the parser can
                // report it, keeping the token stream lossless.
                auto len = std::min(utf8Length(static_cast<unsigned char>(c)), m_text.size() - m_pos);
                push(TokenKind::Punct, m_pos, m_pos + len);
            }
        }
        return std::move(m_out);
    }

private:
    char peek(std::size_t ahead) const
    {
        return m_pos + ahead < m_text.size() ? m_text[m_pos + ahead] : '\0';
    }

    void push(TokenKind kind, std::size_t begin, std::size_t end)
    {
        m_out.tokens.push_back(Token{kind, std::string(m_text.substr(begin, end - begin)), m_file.spanOf(begin, end)});
        m_pos = end;
    }

    std::size_t nextLineStart(std::size_t from) const
    {
        auto nl = m_text.find('\n', from);
        return nl == std::string_view::npos ? m_text.size() : nl + 1;
    }

    void lineComment()
    {
        auto nl = m_text.find('\n', m_pos);
        auto end = nl == std::string_view::npos ? m_text.size() : nl;
        m_out.comments.push_back(m_file.spanOf(m_pos, end));
        m_pos = end;
    }

    void blockComment()
    {
        auto close = m_text.find("*/", m_pos + 2);
        if (close == std::string_view::npos) {
            auto resume = nextLineStart(m_pos);
            m_out.comments.push_back(m_file.spanOf(m_pos, resume));
            m_out.errors.push_back(LexError{LexErrorKind::UnterminatedComment, m_file.spanOf(m_pos, m_text.size())});
            m_pos = resume;
            return;
        }
        m_out.comments.push_back(m_file.spanOf(m_pos, close + 2));
        m_pos = close + 2;
    }

    void string()
    {
        const char quote = m_text[m_pos];
        std::size_t i = m_pos + 1;
        while (i < m_text.size()) {
            char c = m_text[i];
            if (c == '\\' && i + 1 < m_text.size() && m_text[i + 1] != '\n') {
                i += 2;
                continue;
            }
            if (c == quote) {
                m_out.strings.push_back(m_file.spanOf(m_pos, i + 1));
                push(TokenKind::StringLit, m_pos, i + 1);
                return;
            }
            if (c == '\n')
                break;
            ++i;
        }
        auto resume = nextLineStart(m_pos);
        auto lineEnd = std::min(i, m_text.size());
        m_out.strings.push_back(m_file.spanOf(m_pos, lineEnd));
        m_out.errors.push_back(LexError{LexErrorKind::UnterminatedString, m_file.spanOf(m_pos, lineEnd)});
        m_pos = resume;
    }

    void number()
    {
        std::size_t i = m_pos;
        if (m_text[i] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            i += 2;
            while (i < m_text.size() && (std::isxdigit(static_cast<unsigned char>(m_text[i])) || m_text[i] == '_'))
                ++i;
        } else {
            auto digits = [&] {
                while (i < m_text.size() && (std::isdigit(static_cast<unsigned char>(m_text[i])) || m_text[i] == '_'))
                    ++i;
            };
            digits();
            if (i + 1 < m_text.size() && m_text[i] == '.' && std::isdigit(static_cast<unsigned char>(m_text[i + 1]))) {
                ++i;
                digits();
            }
            if (i < m_text.size() && (m_text[i] == 'e' || m_text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < m_text.size() && m_text[j] == '-')
                    ++j;
                if (j < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[j]))) {
                    i = j;
                    digits();
                }
            }
        }
        push(TokenKind::NumberLit, m_pos, i);
    }

    void word()
    {
        std::size_t i = m_pos;
        while (i < m_text.size() && isIdentChar(m_text[i]))
            ++i;
        auto text = m_text.substr(m_pos, i - m_pos);
        push(isKeyword(text) || isElementaryTypeName(text) ? TokenKind::Keyword : TokenKind::Identifier, m_pos, i);
    }

    bool operatorToken()
    {
        auto rest = m_text.substr(m_pos);
        for (auto op : kOperators) {
            if (rest.starts_with(op)) {
                push(TokenKind::Operator, m_pos, m_pos + op.size());
                return true;
            }
        }
        return false;
    }

    const SourceFile& m_file;
    std::string_view m_text;
    std::size_t m_pos = 0;
    TokenStream m_out;
};

} // namespace

std::string_view toString(TokenKind kind)
{
    switch (kind) {
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::NumberLit: return "NumberLit";
    case TokenKind::StringLit: return "StringLit";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Operator: return "Operator";
    }
    return "?";
}

std::string_view toString(LexErrorKind kind)
{
    return kind == LexErrorKind::UnterminatedString ? "UnterminatedString" : "UnterminatedComment";
}

bool TokenStream::inCommentOrString(std::size_t offset) const
{
    auto hit = [offset](const std::vector<Span>& ranges) {
        auto it = std::upper_bound(ranges.begin(), ranges.end(), offset,
                                   [](std::size_t off, const Span& s) { return off < s.begin; });
        return it != ranges.begin() && std::prev(it)->containsOffset(offset);
    };
    return hit(comments) || hit(strings);
}

TokenStream tokenize(const SourceFile& file)
{
    return Lexer(file).run();
}

bool isKeyword(std::string_view word)
{
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool isElementaryTypeName(std::string_view word)
{
    if (word == "address" || word == "bool" || word == "string" || word == "bytes" || word == "byte"
        || word == "uint" || word == "int" || word == "fixed" || word == "ufixed")
        return true;
    auto sized = [&](std::string_view prefix, int lo, int hi) {
        if (!word.starts_with(prefix))
            return false;
        auto rest = word.substr(prefix.size());
        if (!allDigits(rest))
            return false;
        int bits = 0;
        std::from_chars(rest.data(), rest.data() + rest.size(), bits);
        return bits >= lo && bits <= hi && (prefix == "bytes" || bits % 8 == 0);
    };
    if (word.starts_with("uint"))
        return sized("uint", 8, 256);
    if (word.starts_with("int"))
        return sized("int", 8, 256);
    if (word.starts_with("bytes"))
        return sized("bytes", 1, 32);
    if (word.starts_with("ufixed") || word.starts_with("fixed")) {
        auto rest = word.substr(word.starts_with("u") ? 6 : 5);
        auto x = rest.find('x');
        return x != std::string_view::npos && allDigits(rest.substr(0, x)) && allDigits(rest.substr(x + 1));
    }
    return false;
}

} // namespace evlint
