#include "dispersal/experiments/oracle.h"

#include <cmath>
#include <random>

#include "dispersal/errors.h"

namespace dispersal::experiments {

namespace {

using models::Attacker;
using models::ModelParams;

class Enumerator {
  public:
    explicit Enumerator(const ModelParams& p) : p_(p), stored_(static_cast<std::size_t>(p.servers), 0) {}

    Rational slice_attack() {
        total_ = 0;
        slice_step(0, 0, Rational(1));
        return total_;
    }

    Rational provider_attack() {
        total_ = 0;
        const int m = p_.servers;
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Rational mass = 1;
            for (int i = 0; i < m; ++i) mass *= (mask >> i & 1u) ? p_.attack[i] : 1 - p_.attack[i];
            if (mass != 0) provider_step(mask, 0, 0, mass);
        }
        return total_;
    }

  private:
    /// Servers the next slice can land on, with their conditional masses.
    std::vector<std::pair<int, Rational>> destinations() const {
        Rational open = 0;
        for (int i = 0; i < p_.servers; ++i)
            if (stored_[i] < p_.capacity) open += p_.routing[i];
        std::vector<std::pair<int, Rational>> out;
        if (open == 0) return out;
        for (int i = 0; i < p_.servers; ++i)
            if (stored_[i] < p_.capacity && p_.routing[i] > 0) out.emplace_back(i, p_.routing[i] / open);
        return out;
    }

    // Eavesdropper: listens to each sent slice; having j >= k1 slices it tries once to rebuild
    // the message and goes back to listening if that fails. The k2-th slice always succeeds.
    void slice_step(int sent, int intercepted, const Rational& mass) {
        if (sent == p_.slices) return;
        for (const auto& [server, route] : destinations()) {
            ++stored_[server];
            const Rational& a = p_.attack[server];
            if (a > 0) {
                const int have = intercepted + 1;
                const Rational caught = mass * route * a;
                if (have >= p_.k2) {
                    total_ += caught;
                } else if (have >= p_.k1) {
                    total_ += caught * p_.x(have);
                    if (p_.x(have) < 1) slice_step(sent + 1, have, caught * (1 - p_.x(have)));
                } else {
                    slice_step(sent + 1, have, caught);
                }
            }
            if (a < 1) slice_step(sent + 1, intercepted, mass * route * (1 - a));
            --stored_[server];
        }
    }

    // Provider intruder: owns the servers in `broken` and reads every slice stored there; one
    // reconstruction attempt once all slices are out.
    void provider_step(std::uint32_t broken, int sent, int captured, const Rational& mass) {
        if (sent == p_.slices) {
            if (captured >= p_.k1) total_ += mass * p_.x(captured);
            return;
        }
        for (const auto& [server, route] : destinations()) {
            ++stored_[server];
            provider_step(broken, sent + 1, captured + ((broken >> server & 1u) ? 1 : 0), mass * route);
            --stored_[server];
        }
    }

    const ModelParams& p_;
    std::vector<int> stored_;
    Rational total_;
};

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class Simulator {
  public:
    Simulator(const ModelParams& p, std::uint64_t seed) : p_(p), rng_(seed) {
        for (const auto& r : p.routing) routing_.push_back(r.get_d());
        for (const auto& a : p.attack) attack_.push_back(a.get_d());
        for (const auto& x : p.reconstruction) x_.push_back(x.get_d());
    }

    bool run(Attacker attacker) {
        stored_.assign(static_cast<std::size_t>(p_.servers), 0);
        return attacker == Attacker::Slice ? slice() : provider();
    }

  private:
    double x(int j) const { return x_[static_cast<std::size_t>(j - p_.k1)]; }

    int route() {
        double open = 0;
        for (int i = 0; i < p_.servers; ++i)
            if (stored_[i] < p_.capacity) open += routing_[i];
        double u = uniform(rng_) * open;
        int last = -1;
        for (int i = 0; i < p_.servers; ++i) {
            if (stored_[i] >= p_.capacity || routing_[i] <= 0) continue;
            last = i;
            if (u < routing_[i]) break;
            u -= routing_[i];
        }
        ++stored_[last];
        return last;
    }

    bool slice() {
        int have = 0;
        for (int sent = 0; sent < p_.slices; ++sent) {
            const int server = route();
            if (!(uniform(rng_) < attack_[server])) continue;
            ++have;
            if (have >= p_.k2) return true;
            if (have >= p_.k1 && uniform(rng_) < x(have)) return true;
        }
        return false;
    }

    bool provider() {
        std::vector<char> broken(static_cast<std::size_t>(p_.servers));
        for (int i = 0; i < p_.servers; ++i) broken[i] = uniform(rng_) < attack_[i];
        int captured = 0;
        for (int sent = 0; sent < p_.slices; ++sent)
            if (broken[route()]) ++captured;
        return captured >= p_.k1 && uniform(rng_) < x(captured);
    }

    const ModelParams& p_;
    std::mt19937_64 rng_;
    std::vector<double> routing_, attack_, x_;
    std::vector<int> stored_;
};

}  // namespace

Rational enumerate_oracle(const ModelParams& params, Attacker attacker, const OracleOptions& options) {
    models::require_valid(params);
    if (params.slices > options.max_slices || params.servers > options.max_servers)
        throw PreconditionError("enumeration oracle is limited to n <= " + std::to_string(options.max_slices) +
                                " and m <= " + std::to_string(options.max_servers));
    Enumerator e(params);
    return attacker == Attacker::Slice ? e.slice_attack() : e.provider_attack();
}

MonteCarloEstimate monte_carlo(const ModelParams& params, Attacker attacker, std::uint64_t samples,
                               std::uint64_t seed) {
    models::require_valid(params);
    if (samples < 1) throw ParameterError("Monte Carlo needs at least one sample");
    Simulator sim(params, seed);
    MonteCarloEstimate out;
    out.samples = samples;
    for (std::uint64_t i = 0; i < samples; ++i)
        if (sim.run(attacker)) ++out.hits;
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
    const double half = 1.96 * std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
    out.low = std::max(0.0, out.estimate - half);
    out.high = std::min(1.0, out.estimate + half);
    return out;
}

}  // namespace dispersal::experiments
