#pragma once

#include <cstddef>
#include <vector>

#include "dispersal/mdp/mdp.h"
#include "dispersal/mdp/module.h"

namespace dispersal::mdp {

struct ExploreOptions {
    std::size_t max_states = 20'000'000;
};

/// Expands the reachable fragment of `module` from `initial` (one value per declared variable,
/// in declaration order). States are numbered in breadth-first discovery order, and choices
/// within a state follow template order, so the result is deterministic.
///
/// Throws ModelError for bad branch probabilities, unknown variables, or two templates of the
/// same action enabled in one state; ExplorationError when an update leaves a variable range.
Mdp expand(const Module& module, const std::vector<int>& initial, const std::vector<PropositionRule>& labels,
           const ExploreOptions& options = {});

/// Same, starting from each variable's declared `init`.
Mdp expand(const Module& module, const std::vector<PropositionRule>& labels, const ExploreOptions& options = {});

}  // namespace dispersal::mdp
