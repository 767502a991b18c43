#include <deque>
#include <limits>

#include "dispersal/errors.h"
#include "dispersal/solver/reach.h"
#include "graph.h"

namespace dispersal::solver {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Solves A x = b in place by Gauss-Jordan elimination over the rationals.
std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw SolverError("singular linear system in exact policy evaluation", 0.0);
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = 1 / a[col][col];
        for (std::size_t k = col; k < n; ++k) a[col][k] *= inv;
        b[col] *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational factor = a[row][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    return b;
}

class PolicyEvaluator {
  public:
    PolicyEvaluator(const detail::ChoiceGraph& g, const std::vector<Rational>& fixed, const std::vector<char>& maybe)
        : g_(g), fixed_(fixed), maybe_(maybe) {}

    /// Values of the Markov chain induced by `policy` (a choice per maybe state).
    std::vector<Rational> evaluate(const std::vector<std::size_t>& policy) const {
        const std::size_t n = g_.num_states();
        std::vector<Rational> x = fixed_;

        // Maybe states that cannot reach a positive fixed value under the policy stay at 0.
        std::vector<std::vector<mdp::StateId>> preds(n);
        std::deque<mdp::StateId> queue;
        std::vector<char> live(n, 0);
        for (mdp::StateId s = 0; s < n; ++s) {
            if (!maybe_[s]) {
                if (fixed_[s] > 0) {
                    live[s] = 1;
                    queue.push_back(s);
                }
                continue;
            }
            for (const auto& [t, p] : outcomes(policy[s]))
                if (p > 0) preds[t].push_back(s);
        }
        while (!queue.empty()) {
            mdp::StateId t = queue.front();
            queue.pop_front();
            for (mdp::StateId s : preds[t])
                if (!live[s]) {
                    live[s] = 1;
                    queue.push_back(s);
                }
        }

        for (const auto& component : components(policy, live)) {
            if (component.size() == 1 && !self_loop(component[0], policy)) {
                mdp::StateId s = component[0];
                Rational v = 0;
                for (const auto& [t, p] : outcomes(policy[s])) v += p * x[t];
                x[s] = v;
                continue;
            }
            std::vector<std::size_t> local(n, kNone);
            for (std::size_t i = 0; i < component.size(); ++i) local[component[i]] = i;
            const std::size_t k = component.size();
            std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
            std::vector<Rational> b(k, Rational(0));
            for (std::size_t i = 0; i < k; ++i) {
                a[i][i] = 1;
                for (const auto& [t, p] : outcomes(policy[component[i]])) {
                    if (local[t] != kNone)
                        a[i][local[t]] -= p;
                    else
                        b[i] += p * x[t];
                }
            }
            std::vector<Rational> solved = solve_dense(std::move(a), std::move(b));
            for (std::size_t i = 0; i < k; ++i) x[component[i]] = solved[i];
        }
        return x;
    }

    const std::vector<std::pair<mdp::StateId, Rational>>& outcomes(std::size_t choice) const {
        return g_.choice_source[choice]->distribution.outcomes;
    }

  private:
    bool self_loop(mdp::StateId s, const std::vector<std::size_t>& policy) const {
        for (const auto& [t, p] : outcomes(policy[s]))
            if (t == s && p > 0) return true;
        return false;
    }

    /// Strongly connected components of the induced chain over live maybe states, successors
    /// first (iterative Tarjan).
    std::vector<std::vector<mdp::StateId>> components(const std::vector<std::size_t>& policy,
                                                      const std::vector<char>& live) const {
        const std::size_t n = g_.num_states();
        std::vector<std::size_t> index(n, kNone), low(n, 0);
        std::vector<char> on_stack(n, 0);
        std::vector<mdp::StateId> stack;
        std::vector<std::vector<mdp::StateId>> out;
        std::size_t counter = 0;
        auto inside = [&](mdp::StateId t) { return maybe_[t] && live[t]; };

        struct Frame {
            mdp::StateId state;
            std::size_t next;
        };
        for (mdp::StateId root = 0; root < n; ++root) {
            if (!inside(root) || index[root] != kNone) continue;
            std::vector<Frame> frames{{root, 0}};
            index[root] = low[root] = counter++;
            stack.push_back(root);
            on_stack[root] = 1;
            while (!frames.empty()) {
                Frame& f = frames.back();
                const auto& succ = outcomes(policy[f.state]);
                if (f.next < succ.size()) {
                    mdp::StateId t = succ[f.next++].first;
                    if (!inside(t)) continue;
                    if (index[t] == kNone) {
                        index[t] = low[t] = counter++;
                        stack.push_back(t);
                        on_stack[t] = 1;
                        frames.push_back({t, 0});
                    } else if (on_stack[t]) {
                        low[f.state] = std::min(low[f.state], index[t]);
                    }
                    continue;
                }
                mdp::StateId s = f.state;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().state] = std::min(low[frames.back().state], low[s]);
                if (low[s] == index[s]) {
                    std::vector<mdp::StateId> component;
                    mdp::StateId t;
                    do {
                        t = stack.back();
                        stack.pop_back();
                        on_stack[t] = 0;
                        component.push_back(t);
                    } while (t != s);
                    out.push_back(std::move(component));
                }
            }
        }
        return out;
    }

    const detail::ChoiceGraph& g_;
    const std::vector<Rational>& fixed_;
    const std::vector<char>& maybe_;
};

}  // namespace

ExactResult exact_solve(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                        const ExactOptions& options) {
    if (m.num_states() > options.max_states)
        throw PreconditionError("exact solver refuses " + std::to_string(m.num_states()) + " states (cap " +
                                std::to_string(options.max_states) + "); use value iteration");
    const std::vector<char> target = target_states(m, proposition);
    const QualitativeSets sets = qualitative_sets(m, target, direction);
    const detail::ChoiceGraph g(m);
    const std::size_t n = g.num_states();

    std::vector<Rational> fixed(n, Rational(0));
    std::vector<char> maybe(n, 0);
    for (mdp::StateId s = 0; s < n; ++s) {
        if (target[s] || sets.one[s])
            fixed[s] = 1;
        else if (!sets.zero[s])
            maybe[s] = 1;
    }

    // Initial scheduler: for max, follow a shortest path towards the value-1 states so every
    // maybe state starts with positive value; for min any choice will do.
    std::vector<std::size_t> policy(n, kNone);
    for (mdp::StateId s = 0; s < n; ++s)
        if (maybe[s]) policy[s] = g.state_begin[s];
    if (direction == Direction::Max) {
        std::vector<char> seen(n, 0);
        std::deque<mdp::StateId> queue;
        for (mdp::StateId s = 0; s < n; ++s)
            if (fixed[s] > 0) {
                seen[s] = 1;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            mdp::StateId t = queue.front();
            queue.pop_front();
            for (std::size_t i = g.pred_begin[t]; i < g.pred_begin[t + 1]; ++i) {
                std::size_t c = g.pred_choice[i];
                mdp::StateId s = g.choice_state[c];
                if (seen[s] || !maybe[s]) continue;
                seen[s] = 1;
                policy[s] = c;
                queue.push_back(s);
            }
        }
    }

    PolicyEvaluator evaluator(g, fixed, maybe);
    ExactResult out;
    while (true) {
        out.values = evaluator.evaluate(policy);
        bool changed = false;
        for (mdp::StateId s = 0; s < n; ++s) {
            if (!maybe[s]) continue;
            auto value_of = [&](std::size_t c) {
                Rational q = 0;
                for (const auto& [t, p] : evaluator.outcomes(c)) q += p * out.values[t];
                return q;
            };
            Rational best = value_of(policy[s]);
            std::size_t best_choice = policy[s];
            for (std::size_t c = g.state_begin[s]; c < g.state_begin[s + 1]; ++c) {
                if (c == policy[s]) continue;
                Rational q = value_of(c);
                if (direction == Direction::Max ? q > best : q < best) {
                    best = q;
                    best_choice = c;
                }
            }
            if (best_choice != policy[s]) {
                policy[s] = best_choice;
                changed = true;
            }
        }
        if (!changed) break;
        if (++out.improvements > options.max_improvements)
            throw SolverError("scheduler improvement did not stabilise", 0.0);
    }
    out.value = 0;
    for (const auto& [s, p] : m.initial().outcomes) out.value += p * out.values[s];
    return out;
}

Rational exact_reach(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                     const ExactOptions& options) {
    return exact_solve(m, proposition, direction, options).value;
}

}  // namespace dispersal::solver
