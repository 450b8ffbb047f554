#pragma once

// Internal JSON conversions shared by the serialisers. Not installed.

#include <string>

#include "json.hpp"

#include "clutternav/cell.hpp"
#include "clutternav/errors.hpp"

namespace clutternav::detail {

using Json = nlohmann::json;

inline Json cell_to_json(Cell c) { return Json::array({c.x, c.y}); }

inline Cell cell_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw FormatError("cell must be an [x, y] integer pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

inline Json cells_to_json(const std::vector<Cell>& cells) {
    Json out = Json::array();
    for (Cell c : cells) out.push_back(cell_to_json(c));
    return out;
}

inline std::vector<Cell> cells_from_json(const Json& j) {
    if (!j.is_array()) throw FormatError("expected an array of cells");
    std::vector<Cell> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(cell_from_json(e));
    return out;
}

template <typename T>
T require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad field '") + key + "': " + e.what());
    }
}

inline const Json& require_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace clutternav::detail
