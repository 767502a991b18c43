#include "dispersal/errors.h"
#include "dispersal/solver/reach.h"

namespace dispersal::solver {

std::string to_string(SolverMode mode) { return mode == SolverMode::Exact ? "exact" : "value-iteration"; }

ReachResult solve(const mdp::Mdp& m, const ReachQuery& query, SolverMode mode, const SolveOptions& options) {
    ReachResult out;
    out.mode = mode;
    if (mode == SolverMode::Exact) {
        if (query.want_min) {
            out.exact_min = exact_reach(m, query.target, Direction::Min, options.exact);
            out.pmin = out.exact_min->get_d();
        }
        if (query.want_max) {
            out.exact_max = exact_reach(m, query.target, Direction::Max, options.exact);
            out.pmax = out.exact_max->get_d();
        }
        return out;
    }
    if (query.want_min) {
        auto r = value_iteration(m, query.target, Direction::Min, options.value_iteration);
        out.pmin = r.value;
        out.iterations += r.iterations;
        out.residual = std::max(out.residual, r.residual);
    }
    if (query.want_max) {
        auto r = value_iteration(m, query.target, Direction::Max, options.value_iteration);
        out.pmax = r.value;
        out.iterations += r.iterations;
        out.residual = std::max(out.residual, r.residual);
    }
    return out;
}

bool check_pctl_interval(const mdp::Mdp& m, const Rational& a, const Rational& b, const std::string& proposition,
                         SolverMode mode) {
    if (!(0 <= a && a <= b && b <= 1)) throw QueryError("interval bounds must satisfy 0 <= a <= b <= 1");
    ReachResult r = solve(m, ReachQuery{proposition, true, true}, mode);
    if (mode == SolverMode::Exact) return a <= *r.exact_min && b >= *r.exact_max;
    return a.get_d() <= r.pmin && b.get_d() >= r.pmax;
}

}  // namespace dispersal::solver
