#pragma once

#include <evlint/ast.hpp>
#include <evlint/source.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace evlint::testing {

std::filesystem::path fixturePath(const std::string& relative);

SourceFile loadFixture(const std::string& relative);

/// All `.sol` files under a fixture directory, sorted by path.
std::vector<std::filesystem::path> fixtureFiles(const std::string& relativeDir);

/// Structural rendering of every function body in the unit.
std::string dumpUnit(const SourceUnit& unit);

} // namespace evlint::testing

namespace evlint::testing {

/// `// expect: CHECK_ID arg ...` and `// negative: reason` markers by line.
struct Expectations {
    std::map<std::uint32_t, std::vector<std::pair<std::string, std::string>>> expected;
    std::set<std::uint32_t> negatives;
};

Expectations parseExpectations(const SourceFile& file);

} // namespace evlint::testing
