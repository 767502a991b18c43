#pragma once

#include <random>
#include <vector>

#include "dispersal/models/params.h"

namespace test {

using dispersal::Rational;

/// Params with uniform routing and the lt-linear profile for (k1, k2).
inline dispersal::models::ModelParams params(int n, int m, int c, int k1, int k2, std::vector<Rational> attack) {
    dispersal::models::ModelParams p;
    p.slices = n;
    p.servers = m;
    p.capacity = c;
    p.k1 = k1;
    p.k2 = k2;
    p.attack = std::move(attack);
    p.reconstruction = dispersal::models::lt_linear_profile(k1, k2, n);
    p.routing = dispersal::models::uniform_distribution(m);
    return p;
}

/// Random valid parameters with n <= max_n, m <= max_m, probabilities in tenths.
inline dispersal::models::ModelParams random_params(std::mt19937_64& rng, int max_n, int max_m) {
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
    const int n = pick(1, max_n);
    const int m = pick(1, max_m);
    const int c = pick((n + m - 1) / m, n);
    const int k1 = pick(1, n);
    const int k2 = pick(k1, n);
    std::vector<Rational> a;
    for (int i = 0; i < m; ++i) a.push_back(dispersal::frac(pick(0, 10), 10));
    auto p = params(n, m, c, k1, k2, a);
    std::vector<long> w;
    long total = 0;
    for (int i = 0; i < m; ++i) total += w.emplace_back(pick(1, 4));
    p.routing.clear();
    for (long x : w) p.routing.push_back(dispersal::frac(x, total));
    return p;
}

}  // namespace test
