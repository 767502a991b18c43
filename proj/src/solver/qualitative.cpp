#include <deque>

#include "dispersal/errors.h"
#include "dispersal/solver/reach.h"
#include "graph.h"

namespace dispersal::solver {

using detail::ChoiceGraph;

namespace {

/// States that can reach `seed` in the graph, moving backwards only through `allowed` states.
std::vector<char> backward_reach(const ChoiceGraph& g, const std::vector<char>& seed, const std::vector<char>* allowed) {
    std::vector<char> reached = seed;
    std::deque<mdp::StateId> queue;
    for (mdp::StateId s = 0; s < g.num_states(); ++s)
        if (reached[s]) queue.push_back(s);
    while (!queue.empty()) {
        mdp::StateId t = queue.front();
        queue.pop_front();
        for (std::size_t i = g.pred_begin[t]; i < g.pred_begin[t + 1]; ++i) {
            mdp::StateId s = g.choice_state[g.pred_choice[i]];
            if (reached[s] || (allowed && !(*allowed)[s])) continue;
            reached[s] = 1;
            queue.push_back(s);
        }
    }
    return reached;
}

/// Least set R containing `target` and every state with at least one choice, all of whose
/// choices hit R with positive probability: the states where every scheduler reaches the target
/// with positive probability.
std::vector<char> forced_positive(const ChoiceGraph& g, const std::vector<char>& target) {
    const std::size_t n = g.num_states();
    std::vector<char> in = target;
    std::vector<char> choice_hit(g.num_choices(), 0);
    std::vector<std::size_t> missing(n);
    for (mdp::StateId s = 0; s < n; ++s) missing[s] = g.state_begin[s + 1] - g.state_begin[s];
    std::deque<mdp::StateId> queue;
    for (mdp::StateId s = 0; s < n; ++s)
        if (in[s]) queue.push_back(s);
    while (!queue.empty()) {
        mdp::StateId t = queue.front();
        queue.pop_front();
        for (std::size_t i = g.pred_begin[t]; i < g.pred_begin[t + 1]; ++i) {
            std::size_t c = g.pred_choice[i];
            if (choice_hit[c]) continue;
            choice_hit[c] = 1;
            mdp::StateId s = g.choice_state[c];
            if (in[s]) continue;
            if (--missing[s] == 0) {
                in[s] = 1;
                queue.push_back(s);
            }
        }
    }
    return in;
}

/// Prob1E: states with a scheduler reaching the target almost surely.
std::vector<char> exists_almost_sure(const ChoiceGraph& g, const std::vector<char>& target) {
    const std::size_t n = g.num_states();
    std::vector<char> u = backward_reach(g, target, nullptr);
    while (true) {
        // Choices that never leave u.
        std::vector<char> stays(g.num_choices(), 0);
        for (std::size_t c = 0; c < g.num_choices(); ++c) {
            bool ok = true;
            for (std::size_t e = g.choice_begin[c]; e < g.choice_begin[c + 1] && ok; ++e) ok = u[g.successor[e]];
            stays[c] = ok;
        }
        std::vector<char> r(n, 0);
        std::deque<mdp::StateId> queue;
        for (mdp::StateId s = 0; s < n; ++s)
            if (target[s] && u[s]) {
                r[s] = 1;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            mdp::StateId t = queue.front();
            queue.pop_front();
            for (std::size_t i = g.pred_begin[t]; i < g.pred_begin[t + 1]; ++i) {
                std::size_t c = g.pred_choice[i];
                mdp::StateId s = g.choice_state[c];
                if (r[s] || !u[s] || !stays[c]) continue;
                r[s] = 1;
                queue.push_back(s);
            }
        }
        if (r == u) return u;
        u = std::move(r);
    }
}

}  // namespace

std::vector<char> target_states(const mdp::Mdp& m, const std::string& proposition) {
    auto prop = m.find_proposition(proposition);
    if (!prop) throw QueryError("unknown proposition '" + proposition + "'");
    std::vector<char> out(m.num_states(), 0);
    for (mdp::StateId s = 0; s < m.num_states(); ++s) out[s] = m.has_label(s, *prop);
    return out;
}

QualitativeSets qualitative_sets(const mdp::Mdp& m, const std::vector<char>& target, Direction direction) {
    ChoiceGraph g(m);
    const std::size_t n = g.num_states();
    QualitativeSets out;
    if (direction == Direction::Max) {
        std::vector<char> reach = backward_reach(g, target, nullptr);
        out.zero.assign(n, 0);
        for (std::size_t s = 0; s < n; ++s) out.zero[s] = !reach[s];
        out.one = exists_almost_sure(g, target);
    } else {
        std::vector<char> positive = forced_positive(g, target);
        out.zero.assign(n, 0);
        for (std::size_t s = 0; s < n; ++s) out.zero[s] = !positive[s];
        // Pmin < 1 iff some scheduler can reach a zero state while avoiding the target.
        std::vector<char> avoid(n, 0);
        for (std::size_t s = 0; s < n; ++s) avoid[s] = !target[s];
        std::vector<char> escape = backward_reach(g, out.zero, &avoid);
        out.one.assign(n, 0);
        for (std::size_t s = 0; s < n; ++s) out.one[s] = !escape[s];
    }
    return out;
}

QualitativeSets qualitative_sets(const mdp::Mdp& m, const std::string& proposition, Direction direction) {
    return qualitative_sets(m, target_states(m, proposition), direction);
}

}  // namespace dispersal::solver
