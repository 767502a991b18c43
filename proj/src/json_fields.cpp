#include "json_fields.h"

#include <algorithm>

namespace dispersal::detail {

Json parse_json(const std::string& text, const std::string& source) {
    try {
        Json j = Json::parse(text);
        if (!j.is_object()) throw ConfigError("", source + ": top level must be an object");
        return j;
    } catch (const Json::parse_error& e) {
        // e.what() already names the line and column.
        throw ConfigError("", source + ": " + e.what());
    }
}

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

Rational as_rational(const Json& value, const std::string& path) {
    std::string text;
    if (value.is_string())
        text = value.get<std::string>();
    else if (value.is_number())
        text = value.dump();
    else
        throw ConfigError(path, "expected a number or a \"num/den\" string");
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError(path, "malformed number '" + text + "'");
    }
}

std::vector<Rational> as_rational_list(const Json& value, const std::string& path) {
    if (!value.is_array()) throw ConfigError(path, "expected a list");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(as_rational(value[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

int as_int(const Json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = value.get<long long>();
    if (v < -1'000'000'000 || v > 1'000'000'000) throw ConfigError(path, "integer out of range");
    return static_cast<int>(v);
}

std::string as_string(const Json& value, const std::string& path) {
    if (!value.is_string()) throw ConfigError(path, "expected a string");
    return value.get<std::string>();
}

bool as_bool(const Json& value, const std::string& path) {
    if (!value.is_boolean()) throw ConfigError(path, "expected true or false");
    return value.get<bool>();
}

const Json* find(const Json& object, const std::string& key) {
    auto it = object.find(key);
    return it == object.end() || it->is_null() ? nullptr : &*it;
}

std::optional<int> optional_int(const Json& object, const std::string& key, const std::string& parent) {
    if (const Json* v = find(object, key)) return as_int(*v, join_path(parent, key));
    return std::nullopt;
}

std::optional<Rational> optional_rational(const Json& object, const std::string& key, const std::string& parent) {
    if (const Json* v = find(object, key)) return as_rational(*v, join_path(parent, key));
    return std::nullopt;
}

std::optional<std::string> optional_string(const Json& object, const std::string& key, const std::string& parent) {
    if (const Json* v = find(object, key)) return as_string(*v, join_path(parent, key));
    return std::nullopt;
}

void reject_unknown(const Json& object, const std::vector<std::string>& allowed, const std::string& parent) {
    for (auto it = object.begin(); it != object.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError(join_path(parent, it.key()), "unknown field");
}

}  // namespace dispersal::detail
