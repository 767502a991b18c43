#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dispersal/models/builders.h"
#include "dispersal/models/params.h"
#include "dispersal/rational.h"
#include "dispersal/solver/reach.h"

namespace dispersal::experiments {

enum class SweepSolver { ValueIteration, Exact, MonteCarlo };

std::string to_string(SweepSolver solver);
SweepSolver parse_sweep_solver(const std::string& text);

/// A family of instances indexed by n. Thresholds scale with n: rs uses k1 = k2 = round(ratio*n),
/// lt-linear uses round(k1_ratio*n) and round(k2_ratio*n) with the linear x profile. Capacity
/// defaults to n.
struct SweepSpec {
    models::Attacker attacker = models::Attacker::Slice;
    models::ClientKind client = models::ClientKind::Abstract;
    std::string profile = "lt-linear";
    Rational ratio{7, 10};
    Rational k1_ratio{3, 5};
    Rational k2_ratio{4, 5};
    int n_from = 1;
    int n_to = 1;
    int n_step = 1;
    int servers = 1;
    std::optional<int> capacity;
    std::vector<Rational> attack;   // a_1..a_m
    std::vector<Rational> routing;  // empty: uniform
    SweepSolver solver = SweepSolver::ValueIteration;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 1;
    bool timing = true;  // false writes wall_ms as 0 so reruns are byte-identical

    std::vector<int> points() const;
    models::ModelParams params_for(int n) const;
};

/// Reads the JSON sweep dialect: {attacker, client?, profile, ratio?, k1_ratio?, k2_ratio?,
/// n_from, n_to, n_step, m, c?, a: [...] | {"uniform": [lo, hi]}, p?, solver?, samples?, seed?,
/// timing?}. The uniform rule spreads a_1..a_m evenly over [lo, hi], endpoints included.
/// Throws ConfigError naming the field.
SweepSpec parse_sweep_spec(const std::string& text, const std::string& source = "spec");
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRow {
    int n = 0;
    double pmin = 0;
    double pmax = 0;
    std::size_t states = 0;
    std::size_t transitions = 0;
    double wall_ms = 0;
    std::size_t iterations = 0;
    std::optional<std::string> error;  // solver or parameter failure for this point
};

/// Evaluates one point of the sweep.
SweepRow sweep_point(const SweepSpec& spec, int n);

/// All points, in parallel on up to `threads` workers (0: hardware concurrency, further capped
/// by DISPERSAL_MC_THREADS). Rows come back ordered by n.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads = 0);

/// Header n,pmin,pmax,states,transitions,wall_ms,iterations; probabilities with 12 significant
/// digits, LF endings. A failed point leaves pmin and pmax empty.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace dispersal::experiments
