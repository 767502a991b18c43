#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dispersal/mdp/mdp.h"
#include "dispersal/rational.h"

namespace dispersal::solver {

enum class Direction { Min, Max };

/// States labeled with `proposition`. Throws QueryError when the MDP does not declare it.
std::vector<char> target_states(const mdp::Mdp& m, const std::string& proposition);

/// Graph-based precomputation: `zero` holds states whose optimal (per direction) probability of
/// reaching the target is 0, `one` those where it is 1.
struct QualitativeSets {
    std::vector<char> zero;
    std::vector<char> one;
};

QualitativeSets qualitative_sets(const mdp::Mdp& m, const std::vector<char>& target, Direction direction);
QualitativeSets qualitative_sets(const mdp::Mdp& m, const std::string& proposition, Direction direction);

struct ValueIterationOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 1'000'000;
    /// Verify every Gauss-Seidel update is non-decreasing (iterates approach from below).
    bool check_monotone = false;
};

struct ValueIterationResult {
    double value = 0;  // iota-weighted
    std::vector<double> values;
    std::size_t iterations = 0;
    double residual = 0;
};

/// Gauss-Seidel value iteration over the Bellman operator, seeded by the qualitative sets,
/// sweeping states in index order until the sup-norm change drops below the tolerance.
/// Throws SolverError (carrying the last residual) if the iteration cap is hit.
ValueIterationResult value_iteration(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                                     const ValueIterationOptions& options = {});

double pmin_reach(const mdp::Mdp& m, const std::string& proposition, const ValueIterationOptions& options = {});
double pmax_reach(const mdp::Mdp& m, const std::string& proposition, const ValueIterationOptions& options = {});

struct ExactOptions {
    std::size_t max_states = 20'000;
    std::size_t max_improvements = 10'000;
};

struct ExactResult {
    Rational value;  // iota-weighted
    std::vector<Rational> values;
    std::size_t improvements = 0;
};

/// Exact optimum by scheduler improvement: each memoryless scheduler's induced chain is solved
/// in rational arithmetic, one strongly connected component at a time, and the scheduler is
/// switched wherever another action is strictly better. Refuses (PreconditionError) above
/// `max_states`.
ExactResult exact_solve(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                        const ExactOptions& options = {});

Rational exact_reach(const mdp::Mdp& m, const std::string& proposition, Direction direction,
                     const ExactOptions& options = {});

enum class SolverMode { ValueIteration, Exact };

std::string to_string(SolverMode mode);

struct ReachQuery {
    std::string target = "hacked";
    bool want_min = true;
    bool want_max = true;
};

struct ReachResult {
    double pmin = 0;
    double pmax = 0;
    std::optional<Rational> exact_min;
    std::optional<Rational> exact_max;
    std::size_t iterations = 0;
    double residual = 0;
    SolverMode mode = SolverMode::ValueIteration;
};

struct SolveOptions {
    ValueIterationOptions value_iteration;
    ExactOptions exact;
};

ReachResult solve(const mdp::Mdp& m, const ReachQuery& query, SolverMode mode, const SolveOptions& options = {});

/// M |= P_[a,b] F target, decided as a <= Pmin and b >= Pmax. Exact mode compares rationals;
/// value-iteration mode compares the converged doubles. Requires 0 <= a <= b <= 1 (QueryError).
bool check_pctl_interval(const mdp::Mdp& m, const Rational& a, const Rational& b, const std::string& proposition,
                         SolverMode mode = SolverMode::Exact);

}  // namespace dispersal::solver
