#pragma once

#include <set>
#include <string>

#include "dispersal/mdp/mdp.h"
#include "dispersal/mdp/module.h"

namespace dispersal::mdp {

/// Synchronous product of two modules, PRISM style. A shared action becomes one command per
/// pair of same-action commands (guards conjoined, branch probabilities multiplied), so it
/// fires only where both sides are enabled. Other commands interleave unchanged.
///
/// Guards may read the other module's variables; assignments may not write them
/// (CompositionError). Non-shared action names must not occur in both modules.
Module compose(const Module& first, const Module& second, const std::set<std::string>& shared);

/// Synchronous product of two explicit MDPs over the reachable product states. Variable names
/// must be disjoint; the result's layout is `first` followed by `second`, its propositions the
/// union of both, and each product state carries the union of its components' labels.
Mdp compose(const Mdp& first, const Mdp& second, const std::set<std::string>& shared);

}  // namespace dispersal::mdp
