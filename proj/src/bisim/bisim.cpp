#include "dispersal/bisim/bisim.h"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace dispersal::bisim {

namespace {

struct Edge {
    std::uint32_t action;
    std::vector<std::pair<mdp::StateId, Rational>> outcomes;
};

/// Name-level view of one or more MDPs: actions and propositions are renumbered through shared
/// dictionaries so that states of different MDPs can be compared.
struct Lts {
    std::vector<std::vector<Edge>> edges;
    std::vector<std::vector<std::uint32_t>> labels;  // sorted proposition ids

    void append(const mdp::Mdp& m, std::map<std::string, std::uint32_t>& actions,
                std::map<std::string, std::uint32_t>& propositions) {
        const auto offset = static_cast<mdp::StateId>(edges.size());
        std::vector<std::uint32_t> action_id, prop_id;
        for (const auto& a : m.actions()) action_id.push_back(actions.emplace(a, actions.size()).first->second);
        for (const auto& p : m.propositions())
            prop_id.push_back(propositions.emplace(p, propositions.size()).first->second);
        for (mdp::StateId s = 0; s < m.num_states(); ++s) {
            std::vector<Edge> out;
            for (const auto& c : m.choices(s)) {
                Edge e{action_id[c.action], {}};
                for (const auto& [t, p] : c.distribution.outcomes)
                    if (p > 0) e.outcomes.emplace_back(t + offset, p);
                if (!e.outcomes.empty()) out.push_back(std::move(e));
            }
            edges.push_back(std::move(out));
            std::vector<std::uint32_t> l;
            for (std::size_t i = 0; i < prop_id.size(); ++i)
                if (m.has_label(s, i)) l.push_back(prop_id[i]);
            std::sort(l.begin(), l.end());
            labels.push_back(std::move(l));
        }
    }

    std::size_t size() const { return edges.size(); }
};

using BlockMass = std::vector<std::pair<std::size_t, Rational>>;
using Signature = std::vector<std::pair<std::uint32_t, BlockMass>>;

BlockMass lift(const Edge& e, const std::vector<std::size_t>& block_of) {
    std::map<std::size_t, Rational> mass;
    for (const auto& [t, p] : e.outcomes) mass[block_of[t]] += p;
    return BlockMass(mass.begin(), mass.end());
}

Signature signature(const Lts& lts, mdp::StateId s, const std::vector<std::size_t>& block_of) {
    Signature sig;
    for (const auto& e : lts.edges[s]) sig.emplace_back(e.action, lift(e, block_of));
    std::sort(sig.begin(), sig.end());
    return sig;
}

Partition refine(const Lts& lts) {
    const std::size_t n = lts.size();
    std::vector<std::size_t> block_of(n);
    {
        std::map<std::vector<std::uint32_t>, std::size_t> ids;
        for (mdp::StateId s = 0; s < n; ++s) ids.emplace(lts.labels[s], 0);
        std::size_t next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (mdp::StateId s = 0; s < n; ++s) block_of[s] = ids.at(lts.labels[s]);
    }
    std::size_t blocks = n == 0 ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1;

    while (true) {
        std::map<std::pair<std::size_t, Signature>, std::size_t> ids;
        std::vector<decltype(ids)::iterator> where(n);
        for (mdp::StateId s = 0; s < n; ++s)
            where[s] = ids.emplace(std::make_pair(block_of[s], signature(lts, s, block_of)), 0).first;
        std::size_t next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (mdp::StateId s = 0; s < n; ++s) block_of[s] = where[s]->second;
        if (next == blocks) break;
        blocks = next;
    }
    return Partition::from_assignment(std::move(block_of));
}

Lts single(const mdp::Mdp& m) {
    Lts lts;
    std::map<std::string, std::uint32_t> actions, propositions;
    lts.append(m, actions, propositions);
    return lts;
}

}  // namespace

Partition Partition::from_assignment(std::vector<std::size_t> block_of) {
    Partition p;
    std::size_t count = 0;
    for (std::size_t b : block_of) count = std::max(count, b + 1);
    p.blocks.resize(count);
    for (std::size_t s = 0; s < block_of.size(); ++s) p.blocks[block_of[s]].push_back(static_cast<mdp::StateId>(s));
    p.block_of = std::move(block_of);
    return p;
}

NotBisimulationError::NotBisimulationError(Counterexample counterexample)
    : PreconditionError("partition is not a bisimulation: states " + std::to_string(counterexample.first) + " and " +
                        std::to_string(counterexample.second) + " " + counterexample.reason),
      counterexample_(std::move(counterexample)) {}

Partition coarsest_bisimulation(const mdp::Mdp& m) { return refine(single(m)); }

std::optional<Counterexample> find_instability(const mdp::Mdp& m, const Partition& partition) {
    const Lts lts = single(m);
    if (partition.block_of.size() != lts.size())
        throw PreconditionError("partition covers " + std::to_string(partition.block_of.size()) + " states, MDP has " +
                                std::to_string(lts.size()));
    for (const auto& block : partition.blocks) {
        if (block.empty()) continue;
        const mdp::StateId rep = block.front();
        const Signature expected = signature(lts, rep, partition.block_of);
        for (mdp::StateId s : block) {
            if (lts.labels[s] != lts.labels[rep]) return Counterexample{rep, s, "carry different labels"};
            if (signature(lts, s, partition.block_of) != expected)
                return Counterexample{rep, s, "send different mass into some block"};
        }
    }
    return std::nullopt;
}

mdp::Mdp quotient(const mdp::Mdp& m, const Partition& partition) {
    if (auto cex = find_instability(m, partition)) throw NotBisimulationError(*cex);
    const std::size_t blocks = partition.num_blocks();
    auto layout = std::make_shared<mdp::VariableLayout>(
        std::vector<mdp::VariableDecl>{{"block", 0, static_cast<int>(blocks == 0 ? 0 : blocks - 1), 0}});
    mdp::Mdp q(layout);
    for (const auto& a : m.actions()) q.intern_action(a);
    for (const auto& p : m.propositions()) q.intern_proposition(p);
    for (std::size_t b = 0; b < blocks; ++b) q.intern_state({static_cast<int>(b)});
    for (std::size_t b = 0; b < blocks; ++b) {
        const mdp::StateId rep = partition.blocks[b].front();
        for (const auto& c : m.choices(rep)) {
            mdp::Distribution d;
            for (const auto& [t, p] : c.distribution.outcomes)
                if (p > 0) d.add(static_cast<mdp::StateId>(partition.block_of[t]), p);
            if (!d.outcomes.empty()) q.set_choice(static_cast<mdp::StateId>(b), c.action, std::move(d));
        }
        for (std::size_t i = 0; i < m.propositions().size(); ++i)
            if (m.has_label(rep, i)) q.add_label(static_cast<mdp::StateId>(b), i);
    }
    mdp::Distribution init;
    for (const auto& [s, p] : m.initial().outcomes) init.add(static_cast<mdp::StateId>(partition.block_of[s]), p);
    q.set_initial(std::move(init));
    return q;
}

BisimilarityResult bisimilar(const mdp::Mdp& first, const mdp::Mdp& second) {
    BisimilarityResult out;
    auto names = [](const mdp::Mdp& m) {
        std::vector<std::string> v = m.propositions();
        std::sort(v.begin(), v.end());
        return v;
    };
    if (names(first) != names(second)) {
        out.reason = "atomic proposition sets differ";
        return out;
    }
    Lts lts;
    std::map<std::string, std::uint32_t> actions, propositions;
    lts.append(first, actions, propositions);
    lts.append(second, actions, propositions);
    out.offset = first.num_states();
    out.partition = refine(lts);

    std::vector<Rational> mass(out.partition.num_blocks(), Rational(0));
    for (const auto& [s, p] : first.initial().outcomes) mass[out.partition.block_of[s]] += p;
    for (const auto& [s, p] : second.initial().outcomes) mass[out.partition.block_of[s + out.offset]] -= p;
    for (std::size_t b = 0; b < mass.size(); ++b)
        if (mass[b] != 0) {
            out.reason = "initial distributions differ on block " + std::to_string(b);
            return out;
        }
    out.bisimilar = true;
    return out;
}

}  // namespace dispersal::bisim
