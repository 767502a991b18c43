#include "dispersal/cli/cli.h"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "dispersal/bisim/bisim.h"
#include "dispersal/bisim/theorems.h"
#include "dispersal/errors.h"
#include "dispersal/experiments/oracle.h"
#include "dispersal/experiments/sweep.h"
#include "dispersal/models/config.h"
#include "dispersal/prism/export.h"
#include "dispersal/solver/reach.h"
#include "json.hpp"

namespace dispersal::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::string format = "text";
    std::string config, config_a, config_b, spec, out_path;
    std::string attacker, client;
    std::string target = models::kHacked;
    bool exact = false;
    bool no_timing = false;
    unsigned threads = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
};

double rounded(double x) { return std::stod(format_probability(x)); }

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write " + path);
    file << text;
}

models::ModelConfig load(const std::string& path, const Options& o) {
    models::ModelConfig cfg = models::load_model_config(path);
    try {
        if (!o.attacker.empty()) cfg.attacker = models::parse_attacker(o.attacker);
        if (!o.client.empty()) cfg.client = models::parse_client_kind(o.client);
    } catch (const ParameterError& e) {
        throw ConfigError(o.attacker.empty() ? "--client" : "--attacker", e.what());
    }
    return cfg;
}

int cmd_check(const Options& o, std::ostream& out) {
    const auto cfg = load(o.config, o);
    const mdp::Mdp m = models::build_mdp(cfg.params, cfg.attacker, cfg.client);
    const auto mode = o.exact ? solver::SolverMode::Exact : solver::SolverMode::ValueIteration;
    const auto r = solver::solve(m, {o.target, true, true}, mode);
    if (o.format == "json") {
        Json j;
        j["attacker"] = models::to_string(cfg.attacker);
        j["client"] = models::to_string(cfg.client);
        j["states"] = m.num_states();
        j["transitions"] = m.num_transitions();
        j["mode"] = solver::to_string(mode);
        j["pmin"] = rounded(r.pmin);
        j["pmax"] = rounded(r.pmax);
        if (r.exact_min) j["pmin_exact"] = to_string(*r.exact_min);
        if (r.exact_max) j["pmax_exact"] = to_string(*r.exact_max);
        j["iterations"] = r.iterations;
        out << j.dump() << "\n";
        return kOk;
    }
    out << "attacker=" << models::to_string(cfg.attacker) << " client=" << models::to_string(cfg.client)
        << " states=" << m.num_states() << " transitions=" << m.num_transitions() << "\n";
    if (r.exact_min)
        out << "pmin=" << to_string(*r.exact_min) << " pmax=" << to_string(*r.exact_max) << "\n";
    else
        out << "pmin=" << format_probability(r.pmin) << " pmax=" << format_probability(r.pmax) << "\n";
    return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    auto spec = experiments::load_sweep_spec(o.spec);
    if (o.no_timing) spec.timing = false;
    if (o.exact) spec.solver = experiments::SweepSolver::Exact;
    if (!o.attacker.empty()) spec.attacker = models::parse_attacker(o.attacker);
    const auto rows = experiments::sweep(spec, o.threads);
    for (const auto& r : rows)
        if (r.error) err << "n=" << r.n << ": " << *r.error << "\n";
    if (o.format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json j;
            j["n"] = r.n;
            j["pmin"] = r.error ? Json() : Json(rounded(r.pmin));
            j["pmax"] = r.error ? Json() : Json(rounded(r.pmax));
            j["states"] = r.states;
            j["transitions"] = r.transitions;
            j["wall_ms"] = spec.timing ? r.wall_ms : 0.0;
            j["iterations"] = r.iterations;
            if (r.error) j["error"] = *r.error;
            arr.push_back(j);
        }
        write_output(arr.dump() + "\n", o.out_path, out);
    } else {
        std::ostringstream csv;
        experiments::emit_csv(rows, csv);
        write_output(csv.str(), o.out_path, out);
    }
    return kOk;
}

int cmd_bisim(const Options& o, std::ostream& out) {
    const auto a = load(o.config_a, o);
    const auto b = load(o.config_b, o);
    const mdp::Mdp m1 = models::build_mdp(a.params, a.attacker, a.client);
    const mdp::Mdp m2 = models::build_mdp(b.params, b.attacker, b.client);
    const auto r = bisim::bisimilar(m1, m2);
    if (o.format == "json") {
        Json j;
        j["bisimilar"] = r.bisimilar;
        j["states"] = {m1.num_states(), m2.num_states()};
        j["blocks"] = r.partition.num_blocks();
        j["reason"] = r.reason;
        out << j.dump() << "\n";
    } else {
        out << "bisimilar: " << (r.bisimilar ? "true" : "false") << "\n"
            << "states: " << m1.num_states() << " " << m2.num_states() << "\n"
            << "blocks: " << r.partition.num_blocks() << "\n";
        if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
    }
    return kOk;
}

void print_report(const bisim::TheoremReport& report, const Options& o, std::ostream& out) {
    if (o.format == "json")
        out << bisim::to_json(report) << "\n";
    else
        out << bisim::to_text(report);
}

int cmd_thm2(const Options& o, std::ostream& out) {
    const auto cfg = load(o.config, o);
    if (cfg.channels.empty()) throw ConfigError("channels", "verify-thm2 needs a channel description");
    std::vector<models::Channel> small;
    for (const auto& ch : cfg.channels) small.push_back({1, {Rational(1)}, ch.attack});
    print_report(bisim::verify_theorem2(cfg.channel_weights, small, cfg.channels, cfg.params), o, out);
    return kOk;
}

int cmd_thm3(const Options& o, std::ostream& out) {
    const auto cfg = load(o.config, o);
    print_report(bisim::verify_theorem3(cfg.params), o, out);
    return kOk;
}

int cmd_export(const Options& o, std::ostream& out) {
    const auto cfg = load(o.config, o);
    write_output(prism::export_prism(cfg.params, cfg.attacker, cfg.client), o.out_path, out);
    return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const auto cfg = load(o.config, o);
    if (o.samples > 0) {
        const auto est = experiments::monte_carlo(cfg.params, cfg.attacker, o.samples, o.seed);
        if (o.format == "json") {
            Json j;
            j["estimate"] = rounded(est.estimate);
            j["low"] = rounded(est.low);
            j["high"] = rounded(est.high);
            j["samples"] = est.samples;
            j["hits"] = est.hits;
            out << j.dump() << "\n";
        } else {
            out << "estimate=" << format_probability(est.estimate) << " interval=[" << format_probability(est.low)
                << ", " << format_probability(est.high) << "] samples=" << est.samples << "\n";
        }
        return kOk;
    }
    const Rational p = experiments::enumerate_oracle(cfg.params, cfg.attacker);
    if (o.format == "json") {
        Json j;
        j["probability"] = to_string(p);
        j["value"] = rounded(p.get_d());
        out << j.dump() << "\n";
    } else {
        out << "probability=" << to_string(p) << " (" << format_probability(p.get_d()) << ")\n";
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Confidentiality model checker for dispersed cloud storage", "dispersal"};
    app.require_subcommand(1);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto add_model_flags = [&](CLI::App* sub) {
        sub->add_option("--attacker", o.attacker, "Override the config's attacker")
            ->check(CLI::IsMember({"slice", "provider"}));
        sub->add_option("--client", o.client, "Override the config's client")
            ->check(CLI::IsMember({"full", "abstract"}));
    };

    auto* check = app.add_subcommand("check", "Compute Pmin and Pmax of reaching the target");
    check->add_option("--config", o.config, "Model parameter file")->required();
    add_model_flags(check);
    check->add_flag("--exact", o.exact, "Use the exact rational solver");
    check->add_option("--target", o.target, "Target proposition");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    sweep->add_option("--spec", o.spec, "Sweep specification file")->required();
    sweep->add_option("--out", o.out_path, "Output file (default stdout)");
    sweep->add_option("--attacker", o.attacker, "Override the spec's attacker")
        ->check(CLI::IsMember({"slice", "provider"}));
    sweep->add_flag("--exact", o.exact, "Use the exact rational solver");
    sweep->add_flag("--no-timing", o.no_timing, "Write wall_ms as 0 for byte-identical reruns");
    sweep->add_option("--threads", o.threads, "Worker threads (default: all cores)");

    auto* bisim = app.add_subcommand("bisim", "Decide bisimilarity of two models");
    bisim->add_option("--config-a", o.config_a, "First model parameter file")->required();
    bisim->add_option("--config-b", o.config_b, "Second model parameter file")->required();
    add_model_flags(bisim);

    auto* thm2 = app.add_subcommand("verify-thm2", "Check the one-server-per-channel cutoff on a channel config");
    thm2->add_option("--config", o.config, "Model parameter file with channels")->required();

    auto* thm3 = app.add_subcommand("verify-thm3", "Check that capacity tracking can be dropped when c >= n");
    thm3->add_option("--config", o.config, "Model parameter file")->required();

    auto* exp = app.add_subcommand("export", "Write the model as PRISM source");
    exp->add_option("--config", o.config, "Model parameter file")->required();
    exp->add_option("--out", o.out_path, "Output file (default stdout)");
    add_model_flags(exp);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive enumeration or Monte Carlo estimate");
    oracle->add_option("--config", o.config, "Model parameter file")->required();
    add_model_flags(oracle);
    oracle->add_option("--monte-carlo", o.samples, "Simulate this many runs instead of enumerating");
    oracle->add_option("--seed", o.seed, "Monte Carlo seed");

    for (auto* sub : app.get_subcommands({}))
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (check->parsed()) return cmd_check(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out, err);
        if (bisim->parsed()) return cmd_bisim(o, out);
        if (thm2->parsed()) return cmd_thm2(o, out);
        if (thm3->parsed()) return cmd_thm3(o, out);
        if (exp->parsed()) return cmd_export(o, out);
        if (oracle->parsed()) return cmd_oracle(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const QueryError& e) {
        err << "query error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kRefused;
    }
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace dispersal::cli
