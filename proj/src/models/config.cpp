#include "dispersal/models/config.h"

#include <fstream>
#include <sstream>

#include "json_fields.h"

namespace dispersal::models {

using detail::Json;

namespace {

Channel parse_channel(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object {size, g, a}");
    detail::reject_unknown(j, {"size", "g", "a"}, path);
    Channel ch;
    const Json* size = detail::find(j, "size");
    if (!size) throw ConfigError(path + ".size", "missing");
    ch.size = detail::as_int(*size, path + ".size");
    if (ch.size < 1) throw ConfigError(path + ".size", "must be at least 1");
    if (const Json* g = detail::find(j, "g"))
        ch.pick = detail::as_rational_list(*g, path + ".g");
    else
        ch.pick = uniform_distribution(ch.size);
    const Json* a = detail::find(j, "a");
    if (!a) throw ConfigError(path + ".a", "missing");
    ch.attack = detail::as_rational(*a, path + ".a");
    if (auto problems = check(ch); !problems.empty()) throw ConfigError(path, problems.front());
    return ch;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ModelConfig parse_model_config(const std::string& text, const std::string& source) {
    const Json j = detail::parse_json(text, source);
    detail::reject_unknown(j, {"description", "n", "m", "c", "k1", "k2", "profile", "ratio", "k1_ratio", "k2_ratio",
                               "x", "a", "p", "channels", "f", "attacker", "client"});
    ModelConfig cfg;
    ModelParams& p = cfg.params;

    const auto n = detail::optional_int(j, "n");
    if (!n) throw ConfigError("n", "missing");
    p.slices = *n;
    if (p.slices < 1) throw ConfigError("n", "must be at least 1");
    p.capacity = detail::optional_int(j, "c").value_or(p.slices);

    if (auto a = detail::optional_string(j, "attacker")) {
        try {
            cfg.attacker = parse_attacker(*a);
        } catch (const std::exception& e) {
            throw ConfigError("attacker", e.what());
        }
    }
    if (auto c = detail::optional_string(j, "client")) {
        try {
            cfg.client = parse_client_kind(*c);
        } catch (const std::exception& e) {
            throw ConfigError("client", e.what());
        }
    }

    // Servers: either explicit per-server lists or channels.
    if (const Json* channels = detail::find(j, "channels")) {
        if (detail::find(j, "a") || detail::find(j, "p"))
            throw ConfigError("channels", "give either channels with f or per-server a/p, not both");
        if (!channels->is_array() || channels->empty()) throw ConfigError("channels", "expected a non-empty list");
        for (std::size_t i = 0; i < channels->size(); ++i)
            cfg.channels.push_back(parse_channel((*channels)[i], "channels[" + std::to_string(i) + "]"));
        if (const Json* f = detail::find(j, "f"))
            cfg.channel_weights = detail::as_rational_list(*f, "f");
        else
            cfg.channel_weights = uniform_distribution(static_cast<int>(cfg.channels.size()));
        ChannelExpansion e;
        try {
            e = expand_channels(cfg.channel_weights, cfg.channels);
        } catch (const ParameterError& err) {
            throw ConfigError("f", err.what());
        }
        p.attack = e.attack;
        p.routing = e.routing;
        p.servers = static_cast<int>(e.routing.size());
        if (auto m = detail::optional_int(j, "m"); m && *m != p.servers)
            throw ConfigError("m", "channels describe " + std::to_string(p.servers) + " servers");
    } else {
        if (detail::find(j, "f")) throw ConfigError("f", "only meaningful together with channels");
        const Json* a = detail::find(j, "a");
        if (!a) throw ConfigError("a", "missing");
        p.attack = detail::as_rational_list(*a, "a");
        p.servers = detail::optional_int(j, "m").value_or(static_cast<int>(p.attack.size()));
        if (p.servers < 1) throw ConfigError("m", "must be at least 1");
        if (p.attack.size() != static_cast<std::size_t>(p.servers))
            throw ConfigError("a", "expected " + std::to_string(p.servers) + " entries");
        if (const Json* routing = detail::find(j, "p")) {
            p.routing = detail::as_rational_list(*routing, "p");
            if (p.routing.size() != static_cast<std::size_t>(p.servers))
                throw ConfigError("p", "expected " + std::to_string(p.servers) + " entries");
        } else {
            p.routing = uniform_distribution(p.servers);
        }
    }

    const std::string profile = detail::optional_string(j, "profile").value_or("lt-linear");
    auto k1 = detail::optional_int(j, "k1");
    auto k2 = detail::optional_int(j, "k2");
    try {
        if (profile == "rs") {
            if (!k1) k1 = scaled_threshold(p.slices, detail::optional_rational(j, "ratio").value_or(Rational(7, 10)));
            if (!k2) k2 = k1;
            if (*k1 != *k2) throw ConfigError("k2", "rs profile needs k1 = k2");
            p.k1 = *k1;
            p.k2 = *k2;
            p.reconstruction = step_profile(p.k1, p.slices);
        } else if (profile == "lt-linear") {
            if (!k1) k1 = scaled_threshold(p.slices, detail::optional_rational(j, "k1_ratio").value_or(Rational(3, 5)));
            if (!k2) k2 = scaled_threshold(p.slices, detail::optional_rational(j, "k2_ratio").value_or(Rational(4, 5)));
            p.k1 = *k1;
            p.k2 = *k2;
            p.reconstruction = lt_linear_profile(p.k1, p.k2, p.slices);
        } else if (profile == "explicit") {
            if (!k1 || !k2) throw ConfigError(!k1 ? "k1" : "k2", "required by the explicit profile");
            const Json* x = detail::find(j, "x");
            if (!x) throw ConfigError("x", "required by the explicit profile");
            p.k1 = *k1;
            p.k2 = *k2;
            p.reconstruction = detail::as_rational_list(*x, "x");
        } else {
            throw ConfigError("profile", "expected rs, lt-linear or explicit, got '" + profile + "'");
        }
    } catch (const ParameterError& e) {
        throw ConfigError("profile", e.what());
    }
    if (profile != "explicit" && detail::find(j, "x")) throw ConfigError("x", "only used by the explicit profile");

    if (auto problems = check(p); !problems.empty()) {
        std::string msg = "invalid parameters:";
        for (const auto& pr : problems) msg += " " + pr + ";";
        msg.pop_back();
        throw ConfigError("", msg);
    }
    return cfg;
}

ModelConfig load_model_config(const std::string& path) { return parse_model_config(read_text_file(path), path); }

}  // namespace dispersal::models
