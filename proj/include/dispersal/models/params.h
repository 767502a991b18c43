#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dispersal/rational.h"

namespace dispersal::models {

/// Parameters of the client/intruder models.
///
/// Servers and reconstruction counts are 1-based in the model; here `attack[i]` and
/// `routing[i]` belong to server i+1, and `reconstruction[j - k1]` is x_j for j in [k1, n].
struct ModelParams {
    int slices = 1;      // n
    int servers = 1;     // m
    int capacity = 1;    // c
    int k1 = 1;
    int k2 = 1;
    std::vector<Rational> attack;          // a_i
    std::vector<Rational> reconstruction;  // x_j, j = k1..n
    std::vector<Rational> routing;         // p_i

    const Rational& x(int j) const { return reconstruction.at(static_cast<std::size_t>(j - k1)); }
};

/// Every violated invariant, one message each. Empty iff the parameters are usable.
std::vector<std::string> check(const ModelParams& params);

/// Throws ParameterError listing the violations.
void require_valid(const ModelParams& params);

/// eps_m: m outcomes of mass exactly 1/m.
std::vector<Rational> uniform_distribution(int outcomes);

/// A group of `size` interchangeable servers: pick distribution `pick` inside the channel and
/// common attack probability.
struct Channel {
    int size = 1;
    std::vector<Rational> pick;
    Rational attack;
};

std::vector<std::string> check(const Channel& channel);

/// Per-server routing and attack probabilities obtained by flattening channels in order.
struct ChannelExpansion {
    std::vector<Rational> routing;
    std::vector<Rational> attack;
    std::vector<int> channel_of_server;  // 1-based channel index per server
};

/// Server j of channel i gets routing f(i) * g_i(j) and attack a_i. Throws ParameterError if
/// `channel_weights` and `channels` differ in length or any input is not a distribution.
ChannelExpansion expand_channels(const std::vector<Rational>& channel_weights, const std::vector<Channel>& channels);

/// x_j = (min(j, k2) - k1 + 1) / (k2 - k1 + 1) for j in [k1, n].
std::vector<Rational> lt_linear_profile(int k1, int k2, int n);

/// All-ones profile for threshold schemes with k1 = k2.
std::vector<Rational> step_profile(int k1, int n);

/// round(ratio * n), half-up, clamped to [1, n]. Throws ParameterError if the rounded value is 0
/// or ratio is outside (0, 1].
int scaled_threshold(int n, const Rational& ratio);

/// Reed-Solomon thresholds k1 = k2 = round(ratio * n).
std::pair<int, int> rs_profile(int n, const Rational& ratio);

}  // namespace dispersal::models
