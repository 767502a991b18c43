#include "dispersal/mdp/compose.h"

#include <algorithm>
#include <map>

#include "dispersal/errors.h"

namespace dispersal::mdp {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

void check_alphabets(const std::vector<std::string>& first, const std::vector<std::string>& second,
                     const std::set<std::string>& shared) {
    for (const auto& a : shared)
        if (!contains(first, a) || !contains(second, a))
            throw CompositionError("shared action '" + a + "' is not in both alphabets");
    for (const auto& a : first)
        if (!shared.count(a) && contains(second, a))
            throw CompositionError("action '" + a + "' occurs in both components but is not shared");
}

void check_writes(const Module& writer, const Module& other) {
    for (const auto& t : writer.templates)
        for (const auto& b : t.branches)
            for (const auto& a : b.assignments) {
                if (other.find_variable(a.variable))
                    throw CompositionError("module '" + writer.name + "' writes variable '" + a.variable +
                                           "' owned by '" + other.name + "'");
                if (!writer.find_variable(a.variable))
                    throw CompositionError("module '" + writer.name + "' writes undeclared variable '" +
                                           a.variable + "'");
            }
}

}  // namespace

Module compose(const Module& first, const Module& second, const std::set<std::string>& shared) {
    for (const auto& v : first.variables)
        if (second.find_variable(v.name))
            throw CompositionError("write-write conflict: variable '" + v.name + "' declared by both '" +
                                   first.name + "' and '" + second.name + "'");
    check_writes(first, second);
    check_writes(second, first);
    check_alphabets(first.alphabet(), second.alphabet(), shared);

    Module out;
    out.name = first.name + "||" + second.name;
    out.variables = first.variables;
    out.variables.insert(out.variables.end(), second.variables.begin(), second.variables.end());

    for (const auto& t : first.templates) {
        if (!shared.count(t.action)) {
            out.templates.push_back(t);
            continue;
        }
        for (const auto& u : second.templates) {
            if (u.action != t.action) continue;
            TransitionTemplate product{t.action, t.guard && u.guard, {}};
            for (const auto& bt : t.branches)
                for (const auto& bu : u.branches) {
                    Branch b{bt.probability * bu.probability, bt.assignments};
                    b.assignments.insert(b.assignments.end(), bu.assignments.begin(), bu.assignments.end());
                    product.branches.push_back(std::move(b));
                }
            out.templates.push_back(std::move(product));
        }
    }
    for (const auto& u : second.templates)
        if (!shared.count(u.action)) out.templates.push_back(u);
    return out;
}

Mdp compose(const Mdp& first, const Mdp& second, const std::set<std::string>& shared) {
    std::vector<VariableDecl> vars = first.layout()->variables();
    for (const auto& v : second.layout()->variables()) {
        if (first.layout()->index_of(v.name) >= 0)
            throw CompositionError("write-write conflict: variable '" + v.name + "' belongs to both components");
        vars.push_back(v);
    }
    check_alphabets(first.actions(), second.actions(), shared);

    Mdp out(std::make_shared<const VariableLayout>(std::move(vars)));
    std::vector<ActionId> action_first(first.actions().size());
    std::vector<ActionId> action_second(second.actions().size());
    for (std::size_t i = 0; i < first.actions().size(); ++i) action_first[i] = out.intern_action(first.actions()[i]);
    for (std::size_t i = 0; i < second.actions().size(); ++i)
        action_second[i] = out.intern_action(second.actions()[i]);
    std::vector<std::size_t> prop_first, prop_second;
    for (const auto& p : first.propositions()) prop_first.push_back(out.intern_proposition(p));
    for (const auto& p : second.propositions()) prop_second.push_back(out.intern_proposition(p));

    std::vector<std::pair<StateId, StateId>> pairs;
    auto intern = [&](StateId s1, StateId s2) {
        std::vector<int> values = first.state_values(s1);
        const auto& v2 = second.state_values(s2);
        values.insert(values.end(), v2.begin(), v2.end());
        StateId id = out.intern_state(values);
        if (id == pairs.size()) pairs.emplace_back(s1, s2);
        return id;
    };

    Distribution initial;
    for (const auto& [s1, p1] : first.initial().outcomes)
        for (const auto& [s2, p2] : second.initial().outcomes) initial.add(intern(s1, s2), p1 * p2);
    out.set_initial(std::move(initial));

    for (StateId s = 0; s < out.num_states(); ++s) {
        auto [s1, s2] = pairs[s];
        for (std::size_t i = 0; i < prop_first.size(); ++i)
            if (first.has_label(s1, i)) out.add_label(s, prop_first[i]);
        for (std::size_t i = 0; i < prop_second.size(); ++i)
            if (second.has_label(s2, i)) out.add_label(s, prop_second[i]);

        for (const Choice& c1 : first.choices(s1)) {
            const std::string& name = first.actions()[c1.action];
            if (shared.count(name)) {
                for (const Choice& c2 : second.choices(s2)) {
                    if (second.actions()[c2.action] != name) continue;
                    Distribution d;
                    for (const auto& [t1, p1] : c1.distribution.outcomes)
                        for (const auto& [t2, p2] : c2.distribution.outcomes) d.add(intern(t1, t2), p1 * p2);
                    out.set_choice(s, action_first[c1.action], std::move(d));
                }
                continue;
            }
            Distribution d;
            for (const auto& [t1, p1] : c1.distribution.outcomes) d.add(intern(t1, s2), p1);
            out.set_choice(s, action_first[c1.action], std::move(d));
        }
        for (const Choice& c2 : second.choices(s2)) {
            if (shared.count(second.actions()[c2.action])) continue;
            Distribution d;
            for (const auto& [t2, p2] : c2.distribution.outcomes) d.add(intern(s1, t2), p2);
            out.set_choice(s, action_second[c2.action], std::move(d));
        }
    }
    return out;
}

}  // namespace dispersal::mdp
