#include "dispersal/experiments/sweep.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "dispersal/errors.h"
#include "dispersal/experiments/oracle.h"
#include "dispersal/models/config.h"
#include "json_fields.h"

namespace dispersal::experiments {

using detail::Json;

std::string to_string(SweepSolver solver) {
    switch (solver) {
        case SweepSolver::ValueIteration: return "value-iteration";
        case SweepSolver::Exact: return "exact";
        case SweepSolver::MonteCarlo: return "monte-carlo";
    }
    return "";
}

SweepSolver parse_sweep_solver(const std::string& text) {
    if (text == "value-iteration") return SweepSolver::ValueIteration;
    if (text == "exact") return SweepSolver::Exact;
    if (text == "monte-carlo") return SweepSolver::MonteCarlo;
    throw ParameterError("unknown solver '" + text + "' (expected value-iteration, exact or monte-carlo)");
}

std::vector<int> SweepSpec::points() const {
    std::vector<int> out;
    for (int n = n_from; n <= n_to; n += n_step) out.push_back(n);
    return out;
}

models::ModelParams SweepSpec::params_for(int n) const {
    models::ModelParams p;
    p.slices = n;
    p.servers = servers;
    p.capacity = capacity.value_or(n);
    if (profile == "rs") {
        std::tie(p.k1, p.k2) = models::rs_profile(n, ratio);
        p.reconstruction = models::step_profile(p.k1, n);
    } else {
        p.k1 = models::scaled_threshold(n, k1_ratio);
        p.k2 = models::scaled_threshold(n, k2_ratio);
        p.reconstruction = models::lt_linear_profile(p.k1, p.k2, n);
    }
    p.attack = attack;
    p.routing = routing.empty() ? models::uniform_distribution(servers) : routing;
    return p;
}

SweepSpec parse_sweep_spec(const std::string& text, const std::string& source) {
    const Json j = detail::parse_json(text, source);
    detail::reject_unknown(j, {"description", "attacker", "client", "profile", "ratio", "k1_ratio", "k2_ratio",
                               "n_from", "n_to", "n_step", "m", "c", "a", "p", "solver", "samples", "seed",
                               "timing"});
    SweepSpec spec;
    auto wrap = [](const char* field, auto&& fn) {
        try {
            return fn();
        } catch (const ParameterError& e) {
            throw ConfigError(field, e.what());
        }
    };
    if (auto a = detail::optional_string(j, "attacker"))
        spec.attacker = wrap("attacker", [&] { return models::parse_attacker(*a); });
    if (auto c = detail::optional_string(j, "client"))
        spec.client = wrap("client", [&] { return models::parse_client_kind(*c); });
    spec.profile = detail::optional_string(j, "profile").value_or("lt-linear");
    if (spec.profile != "rs" && spec.profile != "lt-linear")
        throw ConfigError("profile", "sweeps support rs and lt-linear, got '" + spec.profile + "'");
    if (auto r = detail::optional_rational(j, "ratio")) spec.ratio = *r;
    if (auto r = detail::optional_rational(j, "k1_ratio")) spec.k1_ratio = *r;
    if (auto r = detail::optional_rational(j, "k2_ratio")) spec.k2_ratio = *r;

    auto required_int = [&](const char* key) {
        auto v = detail::optional_int(j, key);
        if (!v) throw ConfigError(key, "missing");
        return *v;
    };
    spec.n_from = required_int("n_from");
    spec.n_to = detail::optional_int(j, "n_to").value_or(spec.n_from);
    spec.n_step = detail::optional_int(j, "n_step").value_or(1);
    if (spec.n_from < 1) throw ConfigError("n_from", "must be at least 1");
    if (spec.n_to < spec.n_from) throw ConfigError("n_to", "must not be below n_from");
    if (spec.n_step < 1) throw ConfigError("n_step", "must be at least 1");
    spec.capacity = detail::optional_int(j, "c");

    const Json* a = detail::find(j, "a");
    if (!a) throw ConfigError("a", "missing");
    if (a->is_object()) {
        detail::reject_unknown(*a, {"uniform"}, "a");
        const Json* range = detail::find(*a, "uniform");
        if (!range) throw ConfigError("a.uniform", "missing");
        auto bounds = detail::as_rational_list(*range, "a.uniform");
        if (bounds.size() != 2 || !(0 <= bounds[0] && bounds[0] <= bounds[1] && bounds[1] <= 1))
            throw ConfigError("a.uniform", "expected [lo, hi] with 0 <= lo <= hi <= 1");
        spec.servers = required_int("m");
        if (spec.servers < 1) throw ConfigError("m", "must be at least 1");
        for (int i = 0; i < spec.servers; ++i)
            spec.attack.push_back(spec.servers == 1 ? bounds[0]
                                                    : bounds[0] + (bounds[1] - bounds[0]) * i / (spec.servers - 1));
    } else {
        spec.attack = detail::as_rational_list(*a, "a");
        spec.servers = detail::optional_int(j, "m").value_or(static_cast<int>(spec.attack.size()));
        if (spec.attack.size() != static_cast<std::size_t>(spec.servers))
            throw ConfigError("a", "expected " + std::to_string(spec.servers) + " entries");
    }
    if (const Json* p = detail::find(j, "p")) {
        spec.routing = detail::as_rational_list(*p, "p");
        if (spec.routing.size() != static_cast<std::size_t>(spec.servers))
            throw ConfigError("p", "expected " + std::to_string(spec.servers) + " entries");
    }
    if (auto s = detail::optional_string(j, "solver"))
        spec.solver = wrap("solver", [&] { return parse_sweep_solver(*s); });
    if (auto s = detail::optional_int(j, "samples")) {
        if (*s < 1) throw ConfigError("samples", "must be at least 1");
        spec.samples = static_cast<std::uint64_t>(*s);
    }
    if (const Json* s = detail::find(j, "seed")) {
        if (!s->is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
        spec.seed = s->get<std::uint64_t>();
    }
    if (const Json* t = detail::find(j, "timing")) spec.timing = detail::as_bool(*t, "timing");

    for (int n : spec.points())
        if (auto problems = models::check(wrap("profile", [&] { return spec.params_for(n); })); !problems.empty())
            throw ConfigError("", "n = " + std::to_string(n) + ": " + problems.front());
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) { return parse_sweep_spec(models::read_text_file(path), path); }

SweepRow sweep_point(const SweepSpec& spec, int n) {
    SweepRow row;
    row.n = n;
    const auto start = std::chrono::steady_clock::now();
    try {
        const models::ModelParams params = spec.params_for(n);
        if (spec.solver == SweepSolver::MonteCarlo) {
            const auto est = monte_carlo(params, spec.attacker, spec.samples, spec.seed);
            row.pmin = row.pmax = est.estimate;
            row.iterations = est.samples;
        } else {
            const mdp::Mdp m = models::build_mdp(params, spec.attacker, spec.client);
            row.states = m.num_states();
            row.transitions = m.num_transitions();
            const auto mode =
                spec.solver == SweepSolver::Exact ? solver::SolverMode::Exact : solver::SolverMode::ValueIteration;
            const auto r = solver::solve(m, {}, mode);
            row.pmin = r.pmin;
            row.pmax = r.pmax;
            row.iterations = r.iterations;
        }
    } catch (const Error& e) {
        row.error = e.what();
    }
    if (spec.timing)
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned threads) {
    const std::vector<int> points = spec.points();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DISPERSAL_MC_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));

    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) rows[i] = sweep_point(spec, points[i]);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "n,pmin,pmax,states,transitions,wall_ms,iterations\n";
    for (const auto& r : rows) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
        out << r.n << ',' << (r.error ? "" : format_probability(r.pmin)) << ','
            << (r.error ? "" : format_probability(r.pmax)) << ',' << r.states << ',' << r.transitions << ',' << wall
            << ',' << r.iterations << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    emit_csv(rows, out);
    if (!out) throw Error("write to " + path + " failed");
}

}  // namespace dispersal::experiments
