#pragma once

#include <string>
#include <vector>

#include "dispersal/models/builders.h"
#include "dispersal/models/params.h"

namespace dispersal::models {

/// A model instance read from a JSON parameter file.
///
/// Fields: n, m, c (default n), k1, k2, profile ("rs" | "lt-linear" | "explicit", default
/// "lt-linear"), ratio (rs, default 0.7), k1_ratio / k2_ratio (lt-linear, default 0.6 / 0.8, used
/// when k1/k2 are absent), x (explicit), a, p (default uniform), channels [{size, g, a}] with f,
/// attacker ("slice" | "provider"), client ("full" | "abstract"). Probabilities may be numbers or
/// strings such as "3/8"; both are read exactly.
struct ModelConfig {
    ModelParams params;
    Attacker attacker = Attacker::Slice;
    ClientKind client = ClientKind::Full;
    std::vector<Rational> channel_weights;  // f, when channels are given
    std::vector<Channel> channels;
};

/// Throws ConfigError naming the offending field.
ModelConfig parse_model_config(const std::string& text, const std::string& source = "config");
ModelConfig load_model_config(const std::string& path);

/// Reads a whole file; ConfigError if it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace dispersal::models
