#include "dispersal/bisim/theorems.h"

#include <map>
#include "json.hpp"
#include <sstream>

#include "dispersal/models/builders.h"
#include "dispersal/rational.h"
#include "dispersal/solver/reach.h"

namespace dispersal::bisim {

namespace {

using models::Attacker;
using models::ClientKind;

void probe(TheoremReport& report, const mdp::Mdp& first, const mdp::Mdp& second) {
    const auto a = solver::solve(first, {}, solver::SolverMode::ValueIteration);
    const auto b = solver::solve(second, {}, solver::SolverMode::ValueIteration);
    report.pmin_first = a.pmin;
    report.pmax_first = a.pmax;
    report.pmin_second = b.pmin;
    report.pmax_second = b.pmax;
}

TheoremReport decide(std::string theorem, const mdp::Mdp& first, const mdp::Mdp& second, const WitnessKey& key) {
    TheoremReport report;
    report.theorem = std::move(theorem);
    report.states_first = first.num_states();
    report.states_second = second.num_states();
    const BisimilarityResult result = bisimilar(first, second);
    report.bisimilar = result.bisimilar;
    report.blocks = result.partition.num_blocks();
    report.reason = result.reason;
    if (!result.partition.block_of.empty()) {
        const auto violation = witness_violation(first, second, result, key);
        report.witness_contained = !violation;
        if (violation) {
            auto describe = [&](mdp::StateId s) {
                return s < result.offset ? "M1" + first.valuation(s).to_string()
                                         : "M2" + second.valuation(s - result.offset).to_string();
            };
            report.counterexample = describe(violation->first) + " ~ " + describe(violation->second);
            if (report.reason.empty()) report.reason = "witness relation relates non-bisimilar states";
        }
    }
    if (!result.bisimilar && !report.counterexample) {
        // Point at the initial states, which the verdict separates.
        report.counterexample = "M1" + first.valuation(first.initial().outcomes.front().first).to_string() + " vs M2" +
                                second.valuation(second.initial().outcomes.front().first).to_string();
    }
    report.verdict = report.bisimilar && report.witness_contained;
    probe(report, first, second);
    return report;
}

int value(const mdp::Valuation& v, const std::string& name) { return v[name]; }

/// JSON number carrying the same 12 significant digits as the text output.
double rounded(double x) { return std::stod(format_probability(x)); }

}  // namespace

std::optional<std::pair<mdp::StateId, mdp::StateId>> witness_violation(const mdp::Mdp& first,
                                                                       const mdp::Mdp& second,
                                                                       const BisimilarityResult& result,
                                                                       const WitnessKey& key) {
    std::map<std::vector<int>, mdp::StateId> seen;
    auto visit = [&](int side, const mdp::Mdp& m, std::size_t offset)
        -> std::optional<std::pair<mdp::StateId, mdp::StateId>> {
        for (mdp::StateId s = 0; s < m.num_states(); ++s) {
            const auto u = static_cast<mdp::StateId>(s + offset);
            auto [it, inserted] = seen.emplace(key(side, m.valuation(s)), u);
            if (!inserted && !result.partition.same_block(it->second, u)) return std::make_pair(it->second, u);
        }
        return std::nullopt;
    };
    if (auto v = visit(0, first, 0)) return v;
    return visit(1, second, result.offset);
}

TheoremReport verify_theorem2(const std::vector<Rational>& channel_weights, const std::vector<models::Channel>& small,
                              const std::vector<models::Channel>& big, const models::ModelParams& params) {
    if (small.size() != big.size())
        throw PreconditionError("both systems need the same number of channels (" + std::to_string(small.size()) +
                                " vs " + std::to_string(big.size()) + ")");
    for (const auto& ch : small)
        if (ch.size != 1) throw PreconditionError("the reference system must have one server per channel");
    if (params.capacity < params.slices)
        throw PreconditionError("channel cutoff needs servers that can host every slice (c >= n)");

    auto instance = [&](const std::vector<models::Channel>& channels) {
        models::ChannelExpansion e = models::expand_channels(channel_weights, channels);
        models::ModelParams p = params;
        p.servers = static_cast<int>(channels.empty() ? 0 : e.routing.size());
        p.routing = e.routing;
        p.attack = e.attack;
        return std::make_pair(p, e.channel_of_server);
    };
    const auto [p1, ch1] = instance(small);
    const auto [p2, ch2] = instance(big);
    const mdp::Mdp first = models::build_mdp(p1, Attacker::Slice, ClientKind::Full);
    const mdp::Mdp second = models::build_mdp(p2, Attacker::Slice, ClientKind::Full);

    // Related states agree on the client's control and slice count and on the attacker, route
    // the pending slice to the same channel, and have stored the same number of slices per
    // channel.
    const std::size_t channels = small.size();
    WitnessKey key = [&, ch1 = ch1, ch2 = ch2](int side, const mdp::Valuation& v) {
        const auto& channel_of = side == 0 ? ch1 : ch2;
        std::vector<int> k = {value(v, "pc_c"), value(v, "ctr_c"), value(v, "pc_a"), value(v, "ctr_a")};
        const int s = value(v, "s_c");
        k.push_back(s == 0 ? 0 : channel_of[static_cast<std::size_t>(s - 1)]);
        std::vector<int> per_channel(channels, 0);
        for (std::size_t i = 0; i < channel_of.size(); ++i)
            per_channel[static_cast<std::size_t>(channel_of[i] - 1)] += value(v, "ctr_c_" + std::to_string(i + 1));
        k.insert(k.end(), per_channel.begin(), per_channel.end());
        return k;
    };
    return decide("channel-cutoff", first, second, key);
}

TheoremReport verify_theorem3(const models::ModelParams& params) {
    if (params.capacity < params.slices)
        throw PreconditionError("dropping capacity checks is sound only when c >= n (c = " +
                                std::to_string(params.capacity) + ", n = " + std::to_string(params.slices) + ")");
    models::require_valid(params);
    const mdp::Mdp first = models::build_mdp(params, Attacker::Provider, ClientKind::Full);
    const mdp::Mdp second = models::build_mdp(params, Attacker::Provider, ClientKind::Abstract);

    // Related states agree on every variable Client' keeps.
    std::vector<std::string> kept = {"pc_c", "s_c", "ctr_c", "pc_a", "ctr_a"};
    for (int i = 1; i <= params.servers; ++i) kept.push_back("att_a_" + std::to_string(i));
    WitnessKey key = [kept](int, const mdp::Valuation& v) {
        std::vector<int> k;
        for (const auto& name : kept) k.push_back(value(v, name));
        return k;
    };
    return decide("capacity-abstraction", first, second, key);
}

std::string to_text(const TheoremReport& r) {
    std::ostringstream out;
    out << "theorem: " << r.theorem << "\n"
        << "verdict: " << (r.verdict ? "holds" : "fails") << "\n"
        << "bisimilar: " << (r.bisimilar ? "true" : "false") << "\n"
        << "witness_contained: " << (r.witness_contained ? "true" : "false") << "\n"
        << "states: " << r.states_first << " " << r.states_second << "\n"
        << "blocks: " << r.blocks << "\n"
        << "M1 pmin=" << format_probability(r.pmin_first) << " pmax=" << format_probability(r.pmax_first) << "\n"
        << "M2 pmin=" << format_probability(r.pmin_second) << " pmax=" << format_probability(r.pmax_second) << "\n";
    if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
    if (r.counterexample) out << "counterexample: " << *r.counterexample << "\n";
    return out.str();
}

std::string to_json(const TheoremReport& r) {
    nlohmann::ordered_json j;
    j["theorem"] = r.theorem;
    j["verdict"] = r.verdict;
    j["bisimilar"] = r.bisimilar;
    j["witness_contained"] = r.witness_contained;
    j["states"] = {r.states_first, r.states_second};
    j["blocks"] = r.blocks;
    j["pmin"] = {rounded(r.pmin_first), rounded(r.pmin_second)};
    j["pmax"] = {rounded(r.pmax_first), rounded(r.pmax_second)};
    j["reason"] = r.reason;
    j["counterexample"] = r.counterexample ? nlohmann::ordered_json(*r.counterexample) : nlohmann::ordered_json();
    return j.dump();
}

}  // namespace dispersal::bisim
