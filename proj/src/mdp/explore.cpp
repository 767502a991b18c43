#include "dispersal/mdp/explore.h"

#include <deque>
#include <string>

#include "dispersal/errors.h"

namespace dispersal::mdp {

namespace {

struct CompiledAssignment {
    std::size_t slot;
    CompiledExpr value;
};

struct CompiledBranch {
    Rational probability;
    std::vector<CompiledAssignment> assignments;
};

struct CompiledTemplate {
    ActionId action;
    CompiledExpr guard;
    std::vector<CompiledBranch> branches;
};

}  // namespace

Mdp expand(const Module& module, const std::vector<int>& initial, const std::vector<PropositionRule>& labels,
           const ExploreOptions& options) {
    auto layout = std::make_shared<const VariableLayout>(module.variables);
    Mdp result(layout);

    auto slot_of = [&](const std::string& name) {
        int i = layout->index_of(name);
        if (i < 0) throw ModelError("module '" + module.name + "' references undeclared variable '" + name + "'");
        return i;
    };

    std::vector<CompiledTemplate> templates;
    templates.reserve(module.templates.size());
    for (const auto& t : module.templates) {
        CompiledTemplate ct{result.intern_action(t.action), CompiledExpr::compile(t.guard, slot_of), {}};
        Rational total = 0;
        for (const auto& b : t.branches) {
            if (!is_probability(b.probability))
                throw ModelError("action '" + t.action + "': branch probability " + to_string(b.probability) +
                                 " outside [0,1]");
            total += b.probability;
            if (b.probability == 0) continue;
            CompiledBranch cb{b.probability, {}};
            for (const auto& a : b.assignments)
                cb.assignments.push_back({static_cast<std::size_t>(slot_of(a.variable)),
                                          CompiledExpr::compile(a.value, slot_of)});
            ct.branches.push_back(std::move(cb));
        }
        if (total != 1)
            throw ModelError("action '" + t.action + "': branch probabilities sum to " + to_string(total) + ", not 1");
        templates.push_back(std::move(ct));
    }

    std::vector<std::pair<std::size_t, CompiledExpr>> label_exprs;
    for (const auto& rule : labels)
        label_exprs.emplace_back(result.intern_proposition(rule.name), CompiledExpr::compile(rule.condition, slot_of));

    auto check_range = [&](const std::vector<int>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto& decl = (*layout)[i];
            if (values[i] < decl.low || values[i] > decl.high)
                throw ExplorationError(decl.name, values[i],
                                       "variable '" + decl.name + "' = " + std::to_string(values[i]) +
                                           " leaves its range [" + std::to_string(decl.low) + ".." +
                                           std::to_string(decl.high) + "]");
        }
    };

    if (initial.size() != layout->size()) throw ModelError("initial valuation does not cover every variable");
    check_range(initial);
    StateId init = result.intern_state(initial);
    result.set_initial(Distribution{{{init, Rational(1)}}});

    std::vector<int> target;
    std::vector<int> updated;
    for (StateId s = 0; s < result.num_states(); ++s) {
        // Copy: interning may reallocate the state table.
        const std::vector<int> source = result.state_values(s);
        for (const auto& [prop, expr] : label_exprs)
            if (expr.eval(source)) result.add_label(s, prop);

        std::vector<ActionId> used;
        for (const auto& t : templates) {
            if (!t.guard.eval(source)) continue;
            for (ActionId a : used)
                if (a == t.action)
                    throw ModelError("two '" + result.actions()[a] + "' templates enabled in state " +
                                     result.valuation(s).to_string());
            used.push_back(t.action);
            Distribution dist;
            for (const auto& b : t.branches) {
                target = source;
                updated.clear();
                for (const auto& a : b.assignments) updated.push_back(a.value.eval(source));
                for (std::size_t i = 0; i < b.assignments.size(); ++i) target[b.assignments[i].slot] = updated[i];
                check_range(target);
                dist.add(result.intern_state(target), b.probability);
            }
            result.set_choice(s, t.action, std::move(dist));
        }
        if (result.num_states() > options.max_states)
            throw ExplorationError("", 0, "state space exceeds " + std::to_string(options.max_states) + " states");
    }
    return result;
}

Mdp expand(const Module& module, const std::vector<PropositionRule>& labels, const ExploreOptions& options) {
    std::vector<int> initial;
    for (const auto& v : module.variables) initial.push_back(v.init);
    return expand(module, initial, labels, options);
}

}  // namespace dispersal::mdp
