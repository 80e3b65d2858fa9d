#pragma once

#include <evlint/ast.hpp>

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace evlint::testing {

class UnsupportedConstruct : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using NamePair = std::pair<std::string, std::string>;
using EqualitySet = std::set<NamePair>;

struct OracleTable {
    /// Exact equalities among live variables just before each top-level
    /// statement of the body.
    std::map<const Stmt*, EqualitySet> before;
    /// Equalities after the last statement.
    EqualitySet atEnd;
};

/// Concretely runs a straight-line body over integer stores. `inputs` gives
/// initial values for state variables and parameters; locals start at zero.
/// Throws UnsupportedConstruct for anything beyond plain assignments,
/// compound assignments, ++/--, declarations and argument-free-effect emits.
OracleTable bruteForceOracle(const FunctionDef& fn, const ContractDef& contract,
                             const std::map<std::string, long long>& inputs);

NamePair orderedPair(std::string a, std::string b);

struct RandomProgram {
    std::string source;
    std::vector<std::string> stateVars;
    std::vector<std::string> params;
};

/// A contract with one function of at most `maxStmts` statements over at most
/// `maxVars` variables, with `emit P();` probes between statements. With
/// `withCalls`, some statements pass variables to an external function.
RandomProgram randomStraightLineProgram(std::mt19937& rng, int maxStmts, int maxVars, bool withCalls = false);

} // namespace evlint::testing
