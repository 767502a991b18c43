#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dispersal/errors.h"
#include "dispersal/rational.h"
#include "json.hpp"

namespace dispersal::detail {

using Json = nlohmann::json;

/// Parses config text, reporting syntax errors with their line and column.
Json parse_json(const std::string& text, const std::string& source);

std::string join_path(const std::string& parent, const std::string& key);

/// Probability-like value: a JSON number (read through its literal text, so 0.1 is 1/10) or a
/// string such as "3/8" or "0.125".
Rational as_rational(const Json& value, const std::string& path);
std::vector<Rational> as_rational_list(const Json& value, const std::string& path);
int as_int(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
bool as_bool(const Json& value, const std::string& path);

const Json* find(const Json& object, const std::string& key);
std::optional<int> optional_int(const Json& object, const std::string& key, const std::string& parent = "");
std::optional<Rational> optional_rational(const Json& object, const std::string& key, const std::string& parent = "");
std::optional<std::string> optional_string(const Json& object, const std::string& key,
                                           const std::string& parent = "");

/// Rejects keys outside `allowed` so that typos do not pass silently.
void reject_unknown(const Json& object, const std::vector<std::string>& allowed, const std::string& parent = "");

}  // namespace dispersal::detail
