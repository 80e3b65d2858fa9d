#include "fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace evlint::testing {

std::filesystem::path fixturePath(const std::string& relative)
{
    return std::filesystem::path(EVLINT_FIXTURE_DIR) / relative;
}

SourceFile loadFixture(const std::string& relative)
{
    return loadSourceFile(fixturePath(relative));
}

std::vector<std::filesystem::path> fixtureFiles(const std::string& relativeDir)
{
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(fixturePath(relativeDir)))
        if (entry.is_regular_file() && entry.path().extension() == ".sol")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string dumpUnit(const SourceUnit& unit)
{
    std::ostringstream os;
    forEachFunction(unit, [&](const FunctionDef& fn, const ContractDef* c) {
        os << (c ? c->name : std::string("<free>")) << "." << fn.name << "(";
        for (const auto& p : fn.params)
            os << p.typeName << " " << toString(p.dataLocation) << " " << p.name << ",";
        os << ")";
        if (fn.body)
            os << dump(*fn.body);
        os << "\n";
    });
    for (const auto& c : unit.contracts) {
        os << c.name << " vars:";
        for (const auto& v : c.stateVars)
            os << v.typeName << " " << v.name << ",";
        os << " events:";
        for (const auto& e : c.events)
            os << e.name << "/" << e.params.size() << ",";
        os << "\n";
    }
    os << "errors:" << unit.parseErrors.size() << "\n";
    return os.str();
}

} // namespace evlint::testing

namespace evlint::testing {

Expectations parseExpectations(const SourceFile& file)
{
    Expectations out;
    for (std::size_t line = 1; line <= file.lineCount(); ++line) {
        std::string_view text = file.lineText(line);
        auto lineNo = static_cast<std::uint32_t>(line);
        if (auto pos = text.find("// expect:"); pos != std::string_view::npos) {
            std::istringstream words(std::string(text.substr(pos + 10)));
            std::string id;
            std::string arg;
            while (words >> id >> arg)
                out.expected[lineNo].emplace_back(id, arg);
        }
        if (text.find("// negative:") != std::string_view::npos)
            out.negatives.insert(lineNo);
    }
    return out;
}

} // namespace evlint::testing
