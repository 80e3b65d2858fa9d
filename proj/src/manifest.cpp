#include <evlint/manifest.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace evlint {

namespace {

using nlohmann::json;

std::string requireString(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw std::invalid_argument(where + ": missing string field '" + key + "'");
    return it->get<std::string>();
}

std::optional<std::string> optionalString(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw std::invalid_argument(where + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

} // namespace

Manifest loadManifest(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read manifest " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("manifest " + file.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("revisions") || !doc["revisions"].is_array())
        throw std::invalid_argument("manifest " + file.string() + ": expected an object with a 'revisions' array");

    const auto base = file.parent_path();
    Manifest out;
    std::size_t index = 0;
    for (const auto& r : doc["revisions"]) {
        std::string where = "revision #" + std::to_string(index++);
        if (!r.is_object())
            throw std::invalid_argument(where + ": expected an object");
        Revision rev;
        rev.id = requireString(r, "id", where);
        where = "revision " + rev.id;
        rev.message = optionalString(r, "message", where);
        if (!r.contains("pairs") || !r["pairs"].is_array())
            throw std::invalid_argument(where + ": missing 'pairs' array");

        std::optional<std::string> failure;
        for (const auto& p : r["pairs"]) {
            if (!p.is_object())
                throw std::invalid_argument(where + ": pair must be an object");
            FilePair pair;
            pair.path = requireString(p, "path", where);
            auto beforeRef = optionalString(p, "beforeFile", where);
            auto afterRef = optionalString(p, "afterFile", where);
            if (!beforeRef && !afterRef)
                throw std::invalid_argument(where + ": pair " + pair.path + " has neither beforeFile nor afterFile");
            try {
                if (beforeRef)
                    pair.before = loadSourceFile(base / *beforeRef);
                if (afterRef)
                    pair.after = loadSourceFile(base / *afterRef);
            } catch (const IoError& e) {
                failure = e.what();
                break;
            }
            rev.filePairs.push_back(std::move(pair));
        }
        if (failure)
            out.errors.push_back({rev.id, *failure});
        else
            out.revisions.push_back(std::move(rev));
    }
    return out;
}

} // namespace evlint
