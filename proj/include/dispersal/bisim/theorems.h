#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dispersal/bisim/bisim.h"
#include "dispersal/models/params.h"

namespace dispersal::bisim {

/// Outcome of checking that two concrete models are bisimilar, together with a candidate
/// relation (given as a key function: states with equal keys are related) that is expected to
/// sit inside the computed bisimulation.
struct TheoremReport {
    std::string theorem;
    bool bisimilar = false;
    bool witness_contained = false;
    bool verdict = false;  // both of the above
    std::size_t states_first = 0;
    std::size_t states_second = 0;
    std::size_t blocks = 0;
    double pmin_first = 0, pmax_first = 0;
    double pmin_second = 0, pmax_second = 0;
    std::string reason;
    std::optional<std::string> counterexample;  // "s1 ~ s2" valuations
};

/// Key defining a witness relation on the disjoint union; side 0 is the first model.
using WitnessKey = std::function<std::vector<int>(int side, const mdp::Valuation& state)>;

/// First pair related by `key` but split by the union partition, if any.
std::optional<std::pair<mdp::StateId, mdp::StateId>> witness_violation(const mdp::Mdp& first,
                                                                       const mdp::Mdp& second,
                                                                       const BisimilarityResult& result,
                                                                       const WitnessKey& key);

/// Slice-attack model with one server per channel vs. the same channels with more servers.
/// `params` supplies n, c, k1, k2 and x; routing and attack probabilities come from the
/// channels. Requires every small channel to be a single server, equal channel counts and
/// c >= n (PreconditionError otherwise).
TheoremReport verify_theorem2(const std::vector<Rational>& channel_weights, const std::vector<models::Channel>& small,
                              const std::vector<models::Channel>& big, const models::ModelParams& params);

/// Client || ProviderAtt vs. Client' || ProviderAtt. Requires c >= n (PreconditionError).
TheoremReport verify_theorem3(const models::ModelParams& params);

std::string to_text(const TheoremReport& report);
std::string to_json(const TheoremReport& report);

}  // namespace dispersal::bisim
