#pragma once

#include <cstdint>

#include "dispersal/models/builders.h"
#include "dispersal/models/params.h"
#include "dispersal/rational.h"

namespace dispersal::experiments {

struct OracleOptions {
    int max_slices = 6;
    int max_servers = 3;
};

/// Probability that the intruder ends up with the message, by walking every routing sequence and
/// every interception, break-in and reconstruction outcome and summing the mass of the hacked
/// paths. A client whose chosen server is full picks again, so each slice lands on a non-full
/// server j with mass p_j / (sum of p over non-full servers). Works directly on the parameters,
/// independently of the MDP builders and solvers. Refuses (PreconditionError) above the caps.
Rational enumerate_oracle(const models::ModelParams& params, models::Attacker attacker,
                          const OracleOptions& options = {});

struct MonteCarloEstimate {
    double estimate = 0;
    double low = 0;   // 95% normal-approximation interval, clamped to [0,1]
    double high = 0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

/// Simulates the same process `samples` times with mt19937_64 seeded by `seed`; uniform doubles
/// are the top 53 bits of each draw scaled by 2^-53. Reproducible for a given seed.
MonteCarloEstimate monte_carlo(const models::ModelParams& params, models::Attacker attacker, std::uint64_t samples,
                               std::uint64_t seed);

}  // namespace dispersal::experiments
