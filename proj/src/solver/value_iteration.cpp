#include <algorithm>
#include <cmath>
#include <limits>

#include "dispersal/errors.h"
#include "dispersal/solver/reach.h"
#include "graph.h"

namespace dispersal::solver {

ValueIterationResult value_iteration(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                                     const ValueIterationOptions& options) {
    const std::vector<char> target = target_states(m, proposition);
    const QualitativeSets sets = qualitative_sets(m, target, direction);
    const detail::ChoiceGraph g(m);
    const std::size_t n = g.num_states();

    ValueIterationResult out;
    out.values.assign(n, 0.0);
    std::vector<mdp::StateId> maybe;
    for (mdp::StateId s = 0; s < n; ++s) {
        if (sets.one[s] || target[s])
            out.values[s] = 1.0;
        else if (!sets.zero[s])
            maybe.push_back(s);
    }

    const bool maximize = direction == Direction::Max;
    double residual = maybe.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
    while (residual >= options.tolerance) {
        if (iteration == options.max_iterations)
            throw SolverError("value iteration did not converge within " + std::to_string(options.max_iterations) +
                                  " iterations (residual " + std::to_string(residual) + ")",
                              residual);
        ++iteration;
        residual = 0.0;
        for (mdp::StateId s : maybe) {
            double best = maximize ? -1.0 : 2.0;
            for (std::size_t c = g.state_begin[s]; c < g.state_begin[s + 1]; ++c) {
                double q = 0.0;
                for (std::size_t e = g.choice_begin[c]; e < g.choice_begin[c + 1]; ++e)
                    q += g.probability[e] * out.values[g.successor[e]];
                best = maximize ? std::max(best, q) : std::min(best, q);
            }
            best = std::clamp(best, 0.0, 1.0);
            const double old = out.values[s];
            if (options.check_monotone && best < old - 1e-15)
                throw SolverError("value iteration iterate decreased at state " + std::to_string(s), old - best);
            residual = std::max(residual, std::fabs(best - old));
            out.values[s] = best;
        }
    }
    out.iterations = iteration;
    out.residual = residual;
    for (const auto& [s, p] : m.initial().outcomes) out.value += p.get_d() * out.values[s];
    return out;
}

double pmin_reach(const mdp::Mdp& m, const std::string& proposition, const ValueIterationOptions& options) {
    return value_iteration(m, proposition, Direction::Min, options).value;
}

double pmax_reach(const mdp::Mdp& m, const std::string& proposition, const ValueIterationOptions& options) {
    return value_iteration(m, proposition, Direction::Max, options).value;
}

}  // namespace dispersal::solver
