#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dispersal/errors.h"
#include "dispersal/mdp/mdp.h"

namespace dispersal::bisim {

/// Equivalence classes of a state set. Block ids are dense, starting at 0.
struct Partition {
    std::vector<std::size_t> block_of;
    std::vector<std::vector<mdp::StateId>> blocks;

    std::size_t num_blocks() const { return blocks.size(); }
    bool same_block(mdp::StateId a, mdp::StateId b) const { return block_of[a] == block_of[b]; }

    /// Builds the block lists from `block_of` (ids must already be dense).
    static Partition from_assignment(std::vector<std::size_t> block_of);
};

/// Two states the partition puts together although they do not behave alike.
struct Counterexample {
    mdp::StateId first;
    mdp::StateId second;
    std::string reason;
};

/// A partition handed to `quotient` is not a bisimulation.
class NotBisimulationError : public PreconditionError {
  public:
    explicit NotBisimulationError(Counterexample counterexample);
    const Counterexample& counterexample() const { return counterexample_; }

  private:
    Counterexample counterexample_;
};

/// Coarsest probabilistic bisimulation, by signature refinement starting from the label split.
/// A state's signature maps each enabled action to the exact mass it sends into every block.
/// Block ids follow the sorted order of signatures, so they do not depend on state numbering
/// beyond the labels and transition structure.
Partition coarsest_bisimulation(const mdp::Mdp& m);

/// First pair of states sharing a block but differing in labels or block-level masses.
std::optional<Counterexample> find_instability(const mdp::Mdp& m, const Partition& partition);

/// Block-level MDP; block b becomes state b with a single variable `block`. Throws
/// NotBisimulationError when the partition is not a bisimulation.
mdp::Mdp quotient(const mdp::Mdp& m, const Partition& partition);

struct BisimilarityResult {
    bool bisimilar = false;
    std::string reason;  // empty when bisimilar
    /// Coarsest bisimulation of the disjoint union: first's states, then second's shifted by
    /// `offset`. Empty when the proposition sets already differ.
    Partition partition;
    std::size_t offset = 0;
};

/// M1 and M2 are bisimilar iff they have the same propositions and, in the coarsest bisimulation
/// of their disjoint union, both initial distributions put equal mass on every block.
BisimilarityResult bisimilar(const mdp::Mdp& first, const mdp::Mdp& second);

}  // namespace dispersal::bisim
