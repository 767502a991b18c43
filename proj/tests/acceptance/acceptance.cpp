// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "dispersal/bisim/bisim.h"
#include "dispersal/bisim/theorems.h"
#include "dispersal/errors.h"
#include "dispersal/experiments/oracle.h"
#include "dispersal/experiments/sweep.h"
#include "dispersal/models/builders.h"
#include "dispersal/models/config.h"
#include "dispersal/solver/reach.h"
#include "json.hpp"

using namespace dispersal;
using models::Attacker;
using models::ClientKind;
using models::ModelParams;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string first_failure;

    void fail(const std::string& why) {
        if (pass) first_failure = why;
        pass = false;
    }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s%s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(),
                o.pass ? "" : ("; first failure: " + o.first_failure).c_str(), secs);
    std::fflush(stdout);
}

std::string data(const std::string& name) { return std::string(DISPERSAL_TEST_DATA) + "/" + name; }

std::vector<models::ModelConfig> oracle_grid() {
    const auto grid = nlohmann::json::parse(models::read_text_file(data("oracle_grid.json")));
    std::vector<models::ModelConfig> out;
    for (const auto& entry : grid) out.push_back(models::parse_model_config(entry.dump(), "oracle_grid.json"));
    return out;
}

std::string describe(const ModelParams& p, Attacker a) {
    std::ostringstream s;
    s << models::to_string(a) << " n=" << p.slices << " m=" << p.servers << " c=" << p.capacity << " k1=" << p.k1
      << " k2=" << p.k2;
    return s.str();
}

ModelParams standard_params(int n, const std::string& profile, std::vector<Rational> attack) {
    experiments::SweepSpec spec;
    spec.profile = profile;
    spec.servers = 3;
    spec.attack = std::move(attack);
    return spec.params_for(n);
}

const std::vector<Rational> kLow = {frac(1, 10), frac(2, 10), frac(3, 10)};
const std::vector<Rational> kHigh = {frac(3, 10), frac(4, 10), frac(5, 10)};

solver::ReachResult solve_vi(const mdp::Mdp& m) { return solver::solve(m, {}, solver::SolverMode::ValueIteration); }

// Channel grid: sizes up to 3 for k = 1, 2, 3 channels.
struct ChannelCase {
    std::vector<Rational> f;
    std::vector<models::Channel> small, big;
};

std::vector<ChannelCase> channel_grid() {
    std::vector<ChannelCase> out;
    const std::vector<Rational> attacks = {frac(1, 10), frac(1, 4), frac(2, 5)};
    auto pick = [](int size, bool skewed) {
        if (!skewed || size == 1) return models::uniform_distribution(size);
        std::vector<Rational> g(static_cast<std::size_t>(size), frac(1, 2 * (size - 1)));
        g[0] = frac(1, 2);
        return g;
    };
    for (int k = 1; k <= 3; ++k) {
        std::vector<int> sizes(static_cast<std::size_t>(k), 1);
        while (true) {
            ChannelCase c;
            int index = 0;
            for (int s : sizes) {
                const Rational& a = attacks[static_cast<std::size_t>(index)];
                c.small.push_back({1, {1}, a});
                c.big.push_back({s, pick(s, index % 2 == 1), a});
                ++index;
            }
            c.f = models::uniform_distribution(k);
            if (k == 2) c.f = {frac(1, 3), frac(2, 3)};
            out.push_back(c);
            int i = 0;
            while (i < k && sizes[static_cast<std::size_t>(i)] == 3) sizes[static_cast<std::size_t>(i++)] = 1;
            if (i == k) break;
            ++sizes[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

ModelParams thm2_params(int n) {
    ModelParams p;
    p.slices = n;
    p.capacity = n;
    p.k1 = models::scaled_threshold(n, frac(3, 5));
    p.k2 = models::scaled_threshold(n, frac(4, 5));
    p.reconstruction = models::lt_linear_profile(p.k1, p.k2, n);
    return p;
}

std::string run_cli(const std::string& args, const std::string& out_file) {
    const std::string cmd = std::string(DISPERSAL_CLI) + " " + args + " > " + out_file;
    if (std::system(cmd.c_str()) != 0) throw Error("command failed: " + cmd);
    return models::read_text_file(out_file);
}

}  // namespace

int main() {
    criterion(1, "oracle-equivalence", [](Outcome& o) {
        const auto grid = oracle_grid();
        double worst_vi = 0;
        int slice = 0, provider = 0, rs = 0, lt = 0;
        for (const auto& cfg : grid) {
            const auto& p = cfg.params;
            (cfg.attacker == Attacker::Slice ? slice : provider)++;
            (p.k1 == p.k2 ? rs : lt)++;
            const mdp::Mdp m = models::build_mdp(p, cfg.attacker, cfg.client);
            const Rational oracle = experiments::enumerate_oracle(p, cfg.attacker);
            const auto exact = solver::solve(m, {}, solver::SolverMode::Exact);
            const auto vi = solve_vi(m);
            if (*exact.exact_min != oracle || *exact.exact_max != oracle)
                o.fail(describe(p, cfg.attacker) + ": exact " + to_string(*exact.exact_min) + "/" +
                       to_string(*exact.exact_max) + " vs oracle " + to_string(oracle));
            for (double v : {vi.pmin, vi.pmax}) {
                worst_vi = std::max(worst_vi, std::abs(v - oracle.get_d()));
                if (std::abs(v - oracle.get_d()) > 1e-9)
                    o.fail(describe(p, cfg.attacker) + ": value iteration " + format_probability(v) + " vs " +
                           to_string(oracle));
            }
        }
        if (grid.size() < 50) o.fail("grid has fewer than 50 configurations");
        o.detail << grid.size() << " configs (" << slice << " slice, " << provider << " provider, " << rs
                 << " k1=k2, " << lt << " k1<k2); exact == oracle; max |VI - oracle| = " << worst_vi;
    });

    criterion(2, "hand-derivable-anchors", [](Outcome& o) {
        auto slice = models::load_model_config(data("slice_anchor.json"));
        auto provider = models::load_model_config(data("provider_anchor.json"));
        const Rational s_oracle = experiments::enumerate_oracle(slice.params, Attacker::Slice);
        const Rational p_oracle = experiments::enumerate_oracle(provider.params, Attacker::Provider);
        const mdp::Mdp sm = models::build_mdp(slice.params, Attacker::Slice);
        const mdp::Mdp pm = models::build_mdp(provider.params, Attacker::Provider);
        const auto s_exact = solver::solve(sm, {}, solver::SolverMode::Exact);
        const auto p_exact = solver::solve(pm, {}, solver::SolverMode::Exact);
        if (s_oracle != frac(3, 4) || *s_exact.exact_min != frac(3, 4) || *s_exact.exact_max != frac(3, 4))
            o.fail("slice instance is not 3/4");
        if (p_oracle != frac(3, 8) || *p_exact.exact_min != frac(3, 8) || *p_exact.exact_max != frac(3, 8))
            o.fail("provider instance is not 3/8");
        o.detail << "slice oracle=" << to_string(s_oracle) << " exact=[" << to_string(*s_exact.exact_min) << ", "
                 << to_string(*s_exact.exact_max) << "]; provider oracle=" << to_string(p_oracle) << " exact=["
                 << to_string(*p_exact.exact_min) << ", " << to_string(*p_exact.exact_max) << "]";
    });

    criterion(3, "pmin-equals-pmax", [](Outcome& o) {
        double worst = 0;
        int points = 0;
        for (auto attacker : {Attacker::Slice, Attacker::Provider})
            for (const std::string profile : {"lt-linear", "rs"})
                for (int n = 10; n <= 60; n += 10) {
                    const auto p = standard_params(n, profile, kLow);
                    const auto r = solve_vi(models::build_mdp(p, attacker, ClientKind::Abstract));
                    ++points;
                    worst = std::max(worst, std::abs(r.pmax - r.pmin));
                    if (std::abs(r.pmax - r.pmin) > 1e-9)
                        o.fail(describe(p, attacker) + " " + profile + ": pmin " + format_probability(r.pmin) +
                               " pmax " + format_probability(r.pmax));
                }
        o.detail << points << " points (slice/provider x LT/RS x n=10..60), max |pmax - pmin| = " << worst;
    });

    criterion(4, "channel-cutoff", [](Outcome& o) {
        const auto grid = channel_grid();
        int holds = 0, perturbed = 0, runs = 0;
        double worst = 0;
        std::size_t reduction_min = SIZE_MAX;
        for (int n : {2, 3, 5}) {
            for (const auto& c : grid) {
                const auto p = thm2_params(n);
                const auto report = bisim::verify_theorem2(c.f, c.small, c.big, p);
                ++runs;
                if (report.verdict)
                    ++holds;
                else
                    o.fail("n=" + std::to_string(n) + " " + std::to_string(c.big.size()) + " channels: " + report.reason);
                worst = std::max({worst, std::abs(report.pmin_first - report.pmin_second),
                                  std::abs(report.pmax_first - report.pmax_second)});
                if (std::abs(report.pmin_first - report.pmin_second) > 1e-9 ||
                    std::abs(report.pmax_first - report.pmax_second) > 1e-9)
                    o.fail("probabilities differ at n=" + std::to_string(n));
                reduction_min = std::min(reduction_min, report.states_second - report.states_first);

                // Same channels with one attack probability moved: must not be bisimilar.
                auto big = c.big;
                big.back().attack += frac(1, 20);
                const auto bad = bisim::verify_theorem2(c.f, c.small, big, p);
                if (!bad.bisimilar)
                    ++perturbed;
                else
                    o.fail("perturbed a_j still bisimilar at n=" + std::to_string(n));
            }
        }
        o.detail << runs << " instances (k=1..3, sizes 1..3, n in {2,3,5}): " << holds << " bisimilar with witness "
                 << "contained, max prob gap " << worst << "; " << perturbed << "/" << runs
                 << " perturbed instances rejected";
    });

    criterion(5, "capacity-abstraction", [](Outcome& o) {
        int holds = 0, refused = 0, runs = 0;
        double worst = 0;
        for (int n = 1; n <= 5; ++n)
            for (int m = 1; m <= 3; ++m)
                for (int extra : {0, 1})
                    for (const std::string profile : {"lt-linear", "rs"}) {
                        ModelParams p;
                        p.slices = n;
                        p.servers = m;
                        p.capacity = n + extra;
                        if (profile == "rs") {
                            std::tie(p.k1, p.k2) = models::rs_profile(n, frac(7, 10));
                            p.reconstruction = models::step_profile(p.k1, n);
                        } else {
                            p.k1 = models::scaled_threshold(n, frac(3, 5));
                            p.k2 = models::scaled_threshold(n, frac(4, 5));
                            p.reconstruction = models::lt_linear_profile(p.k1, p.k2, n);
                        }
                        for (int i = 0; i < m; ++i) p.attack.push_back(frac(i + n, 10));
                        p.routing = models::uniform_distribution(m);
                        const auto r = bisim::verify_theorem3(p);
                        ++runs;
                        if (r.verdict)
                            ++holds;
                        else
                            o.fail(describe(p, Attacker::Provider) + ": " + r.reason);
                        worst = std::max({worst, std::abs(r.pmin_first - r.pmin_second),
                                          std::abs(r.pmax_first - r.pmax_second)});
                        if (worst > 1e-9) o.fail(describe(p, Attacker::Provider) + ": probabilities differ");

                        if (n >= 2 && m * (n - 1) >= n) {
                            p.capacity = n - 1;
                            try {
                                bisim::verify_theorem3(p);
                                o.fail(describe(p, Attacker::Provider) + ": c < n accepted");
                            } catch (const PreconditionError&) {
                                ++refused;
                            }
                        }
                    }
        o.detail << holds << "/" << runs << " instances bisimilar (n<=5, m<=3, c in {n, n+1}), max prob gap " << worst
                 << "; " << refused << " c<n instances refused";
    });

    criterion(6, "qualitative-trends", [](Outcome& o) {
        std::map<std::string, std::map<int, double>> curve;
        for (int n = 10; n <= 100; n += 10) {
            curve["provider-lt"][n] = solve_vi(models::build_mdp(standard_params(n, "lt-linear", kLow), Attacker::Provider,
                                                                 ClientKind::Abstract)).pmax;
            curve["slice-lt"][n] = solve_vi(models::build_mdp(standard_params(n, "lt-linear", kLow), Attacker::Slice,
                                                              ClientKind::Abstract)).pmax;
            curve["provider-rs"][n] = solve_vi(models::build_mdp(standard_params(n, "rs", kLow), Attacker::Provider,
                                                                 ClientKind::Abstract)).pmax;
            curve["slice-rs"][n] = solve_vi(models::build_mdp(standard_params(n, "rs", kLow), Attacker::Slice,
                                                              ClientKind::Abstract)).pmax;
            curve["slice-lt-high"][n] = solve_vi(models::build_mdp(standard_params(n, "lt-linear", kHigh), Attacker::Slice,
                                                                   ClientKind::Abstract)).pmax;
        }
        for (const std::string profile : {"lt", "rs"})
            for (const auto& [n, p] : curve["provider-" + profile])
                if (p < curve["slice-" + profile][n])
                    o.fail("provider below slice at n=" + std::to_string(n) + " (" + profile + ")");
        double worst_step = 0, worst_step_rs = 0;
        for (int n = 60; n + 10 <= 100; n += 10) {
            const double step = std::abs(curve["provider-lt"][n] - curve["provider-lt"][n + 10]);
            worst_step = std::max(worst_step, step);
            if (step > 1e-3) o.fail("LT provider curve moves " + std::to_string(step) + " at n=" + std::to_string(n));
            worst_step_rs = std::max(worst_step_rs, std::abs(curve["provider-rs"][n] - curve["provider-rs"][n + 10]));
        }
        for (const auto& [n, p] : curve["slice-lt-high"])
            if (p < curve["slice-lt"][n]) o.fail("High below Low at n=" + std::to_string(n));
        o.detail << "n=10..100: provider >= slice (LT and RS); LT provider max |p(n)-p(n+10)| for n>=60 = "
                 << worst_step << " (RS, not asserted: " << worst_step_rs << "); High >= Low for slice; "
                 << "provider LT p(100)=" << format_probability(curve["provider-lt"][100])
                 << ", slice LT p(100)=" << format_probability(curve["slice-lt"][100]);
    });

    criterion(7, "monotonicity", [](Outcome& o) {
        std::mt19937_64 rng(2024);
        auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
        int instances = 0, a_checks = 0, x_checks = 0;
        while (instances < 120) {
            ModelParams p;
            p.slices = pick(1, 5);
            p.servers = pick(1, 3);
            p.capacity = pick((p.slices + p.servers - 1) / p.servers, p.slices);
            p.k1 = pick(1, p.slices);
            p.k2 = pick(p.k1, p.slices);
            p.reconstruction = models::lt_linear_profile(p.k1, p.k2, p.slices);
            std::vector<int> tenths;
            for (int i = 0; i < p.servers; ++i) {
                tenths.push_back(pick(0, 9));
                p.attack.push_back(frac(tenths.back(), 10));
            }
            p.routing = models::uniform_distribution(p.servers);
            const auto attacker = instances % 2 ? Attacker::Provider : Attacker::Slice;
            auto pmax = [&](const ModelParams& q) {
                return solver::exact_reach(models::build_mdp(q, attacker), models::kHacked, solver::Direction::Max);
            };
            const Rational base = pmax(p);
            ++instances;

            ModelParams up = p;
            const auto i = static_cast<std::size_t>(pick(0, p.servers - 1));
            up.attack[i] = frac(pick(tenths[i] + 1, 10), 10);
            ++a_checks;
            if (pmax(up) < base) o.fail("raising a_" + std::to_string(i + 1) + " lowered pmax: " + describe(p, attacker));

            if (p.k1 < p.k2) {
                ModelParams xup = p;
                const int j = pick(p.k1, p.k2 - 1);
                const Rational next = j + 1 <= p.slices ? p.x(j + 1) : Rational(1);
                xup.reconstruction[static_cast<std::size_t>(j - p.k1)] = (p.x(j) + next) / 2;
                ++x_checks;
                if (pmax(xup) < base) o.fail("raising x_" + std::to_string(j) + " lowered pmax: " + describe(p, attacker));
            }
        }
        o.detail << instances << " random instances (n<=5, m<=3), " << a_checks << " a_i raises and " << x_checks
                 << " x_j raises, exact comparison";
    });

    criterion(8, "quotient-consistency", [](Outcome& o) {
        double worst = 0;
        int models_checked = 0, reduced = 0, thm2_models = 0;
        auto check = [&](const mdp::Mdp& m, const std::string& what) {
            const mdp::Mdp q = bisim::quotient(m, bisim::coarsest_bisimulation(m));
            const auto a = solve_vi(m);
            const auto b = solve_vi(q);
            worst = std::max({worst, std::abs(a.pmin - b.pmin), std::abs(a.pmax - b.pmax)});
            if (std::abs(a.pmin - b.pmin) > 1e-9 || std::abs(a.pmax - b.pmax) > 1e-9) o.fail(what + ": values differ");
            ++models_checked;
            if (q.num_states() < m.num_states()) ++reduced;
            return q.num_states() < m.num_states();
        };
        for (const auto& cfg : oracle_grid())
            check(models::build_mdp(cfg.params, cfg.attacker, cfg.client), describe(cfg.params, cfg.attacker));
        for (const auto& c : channel_grid()) {
            ModelParams p = thm2_params(4);
            const auto e = models::expand_channels(c.f, c.big);
            p.servers = static_cast<int>(e.routing.size());
            p.routing = e.routing;
            p.attack = e.attack;
            ++thm2_models;
            if (!check(models::build_mdp(p, Attacker::Slice), "channel instance") && p.servers > 1)
                o.fail("expanded channel instance with " + std::to_string(p.servers) + " servers not reduced");
        }
        o.detail << models_checked << " models (" << thm2_models << " expanded channel instances at n=4), " << reduced
                 << " reduced by the quotient, max |difference| = " << worst;
    });

    criterion(9, "sweep-determinism", [](Outcome& o) {
        const std::string dir = std::filesystem::temp_directory_path().string();
        const std::string spec = data("sweep_section4_lt.json");
        const std::string a = run_cli("sweep --spec " + spec + " --no-timing", dir + "/dispersal_sweep_a.csv");
        const std::string b =
            run_cli("sweep --spec " + spec + " --no-timing --threads 1", dir + "/dispersal_sweep_b.csv");
        const std::string c = run_cli("sweep --spec " + spec + " --no-timing", dir + "/dispersal_sweep_c.csv");
        if (a != b || a != c) o.fail("CSV output differs between runs");
        if (a.find('\r') != std::string::npos) o.fail("CSV contains CR");
        o.detail << "3 runs of " << std::count(a.begin(), a.end(), '\n') - 1 << "-row sweep byte-identical ("
                 << a.size() << " bytes)";
    });

    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
