#pragma once

#include <cstddef>
#include <vector>

#include "dispersal/mdp/mdp.h"

namespace dispersal::solver::detail {

/// Flat view of an MDP's enabled choices. Choices with no mass are dropped.
struct ChoiceGraph {
    std::vector<std::size_t> state_begin;   // choices of s: [state_begin[s], state_begin[s+1])
    std::vector<std::size_t> choice_begin;  // entries of c: [choice_begin[c], choice_begin[c+1])
    std::vector<mdp::StateId> choice_state;
    std::vector<const mdp::Choice*> choice_source;
    std::vector<mdp::StateId> successor;
    std::vector<double> probability;
    // Reverse edges: for state t, the choices having t as a successor.
    std::vector<std::size_t> pred_begin;
    std::vector<std::size_t> pred_choice;

    explicit ChoiceGraph(const mdp::Mdp& m);

    std::size_t num_states() const { return state_begin.size() - 1; }
    std::size_t num_choices() const { return choice_state.size(); }
};

}  // namespace dispersal::solver::detail
