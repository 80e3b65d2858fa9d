#pragma once

#include <evlint/evolution.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace evlint {

struct ManifestError {
    std::string revisionId;
    std::string message;
};

/// Revisions that loaded, plus one record for every revision that was skipped.
struct Manifest {
    std::vector<Revision> revisions;
    std::vector<ManifestError> errors;
};

/// Reads a revision manifest:
///
///     {"revisions": [{"id": "r1", "message": "optional",
///                     "pairs": [{"path": "Token.sol",
///                                "beforeFile": "r1/before/Token.sol",
///                                "afterFile": "r1/after/Token.sol"}]}]}
///
/// File references are relative to the manifest's directory; either side of
/// a pair may be omitted. A revision referencing a missing file is skipped.
/// Throws IoError when the manifest cannot be read and std::invalid_argument
/// when it is not valid JSON or does not follow the schema.
Manifest loadManifest(const std::filesystem::path& file);

} // namespace evlint
