#include "dispersal/models/params.h"

#include <sstream>

#include "dispersal/errors.h"

namespace dispersal::models {

std::vector<std::string> check(const ModelParams& p) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& msg) { out.push_back(msg); };
    if (p.slices < 1) fail("n must be at least 1");
    if (p.servers < 1) fail("m must be at least 1");
    if (p.capacity < 1) fail("c must be at least 1");
    if (p.k1 < 1) fail("k1 must be at least 1");
    if (p.k1 > p.k2 || p.k2 > p.slices) fail("thresholds must satisfy k1 <= k2 <= n");
    if (static_cast<long>(p.slices) > static_cast<long>(p.servers) * p.capacity) fail("n must not exceed m * c");
    if (!out.empty()) return out;

    if (p.attack.size() != static_cast<std::size_t>(p.servers))
        fail("expected " + std::to_string(p.servers) + " attack probabilities, got " + std::to_string(p.attack.size()));
    if (p.routing.size() != static_cast<std::size_t>(p.servers))
        fail("expected " + std::to_string(p.servers) + " routing probabilities, got " +
             std::to_string(p.routing.size()));
    const auto x_count = static_cast<std::size_t>(p.slices - p.k1 + 1);
    if (p.reconstruction.size() != x_count)
        fail("expected " + std::to_string(x_count) + " reconstruction probabilities x_k1..x_n, got " +
             std::to_string(p.reconstruction.size()));
    if (!out.empty()) return out;

    for (int i = 0; i < p.servers; ++i)
        if (!is_probability(p.attack[i])) fail("a_" + std::to_string(i + 1) + " is not in [0,1]");
    Rational routing_total = 0;
    for (int i = 0; i < p.servers; ++i) {
        if (!is_probability(p.routing[i])) fail("p_" + std::to_string(i + 1) + " is not in [0,1]");
        routing_total += p.routing[i];
    }
    if (routing_total != 1) fail("routing probabilities sum to " + to_string(routing_total) + ", not 1");

    for (int j = p.k1; j <= p.slices; ++j) {
        const Rational& xj = p.x(j);
        if (j < p.k2 && !(xj > 0 && xj < 1)) fail("x_" + std::to_string(j) + " must lie strictly between 0 and 1");
        if (j >= p.k2 && xj != 1) fail("x_" + std::to_string(j) + " must be 1");
        if (j < p.slices && xj > p.x(j + 1)) fail("x must be non-decreasing at j=" + std::to_string(j));
    }

    long reachable_capacity = 0;
    for (int i = 0; i < p.servers; ++i)
        if (p.routing[i] > 0) reachable_capacity += p.capacity;
    if (reachable_capacity < p.slices) fail("servers with positive routing probability cannot hold all n slices");
    return out;
}

void require_valid(const ModelParams& params) {
    auto problems = check(params);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ParameterError(msg.str());
}

std::vector<Rational> uniform_distribution(int outcomes) {
    if (outcomes < 1) throw ParameterError("uniform distribution needs at least one outcome");
    return std::vector<Rational>(static_cast<std::size_t>(outcomes), frac(1, outcomes));
}

std::vector<std::string> check(const Channel& channel) {
    std::vector<std::string> out;
    if (channel.size < 1) out.push_back("channel size must be at least 1");
    if (channel.pick.size() != static_cast<std::size_t>(channel.size))
        out.push_back("channel pick distribution must have one entry per server");
    Rational total = 0;
    for (const auto& g : channel.pick) {
        if (!is_probability(g)) out.push_back("channel pick probability outside [0,1]");
        total += g;
    }
    if (total != 1) out.push_back("channel pick distribution sums to " + to_string(total));
    if (!is_probability(channel.attack)) out.push_back("channel attack probability outside [0,1]");
    return out;
}

ChannelExpansion expand_channels(const std::vector<Rational>& channel_weights, const std::vector<Channel>& channels) {
    if (channel_weights.size() != channels.size())
        throw ParameterError("channel distribution has " + std::to_string(channel_weights.size()) +
                             " entries for " + std::to_string(channels.size()) + " channels");
    Rational total = 0;
    for (const auto& f : channel_weights) {
        if (!is_probability(f)) throw ParameterError("channel weight outside [0,1]");
        total += f;
    }
    if (total != 1) throw ParameterError("channel weights sum to " + to_string(total) + ", not 1");

    ChannelExpansion out;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (auto problems = check(channels[i]); !problems.empty())
            throw ParameterError("channel " + std::to_string(i + 1) + ": " + problems.front());
        for (const auto& g : channels[i].pick) {
            out.routing.push_back(channel_weights[i] * g);
            out.attack.push_back(channels[i].attack);
            out.channel_of_server.push_back(static_cast<int>(i + 1));
        }
    }
    return out;
}

std::vector<Rational> lt_linear_profile(int k1, int k2, int n) {
    if (!(1 <= k1 && k1 <= k2 && k2 <= n)) throw ParameterError("lt-linear profile needs 1 <= k1 <= k2 <= n");
    const Rational delta(1, k2 - k1 + 1);
    std::vector<Rational> x;
    for (int j = k1; j <= n; ++j) x.push_back((std::min(j, k2) - k1 + 1) * delta);
    return x;
}

std::vector<Rational> step_profile(int k1, int n) {
    if (!(1 <= k1 && k1 <= n)) throw ParameterError("step profile needs 1 <= k1 <= n");
    return std::vector<Rational>(static_cast<std::size_t>(n - k1 + 1), Rational(1));
}

int scaled_threshold(int n, const Rational& ratio) {
    if (!(ratio > 0 && ratio <= 1)) throw ParameterError("threshold ratio must lie in (0, 1]");
    // floor(ratio * n + 1/2)
    Rational shifted = ratio * n + Rational(1, 2);
    mpz_class floored;
    mpz_fdiv_q(floored.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    long k = floored.get_si();
    if (k < 1)
        throw ParameterError("threshold round(" + to_string(ratio) + " * " + std::to_string(n) + ") rounds to 0");
    if (k > n) k = n;
    return static_cast<int>(k);
}

std::pair<int, int> rs_profile(int n, const Rational& ratio) {
    int k = scaled_threshold(n, ratio);
    return {k, k};
}

}  // namespace dispersal::models
