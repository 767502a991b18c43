#pragma once

#include <string>
#include <vector>

#include "dispersal/mdp/expr.h"
#include "dispersal/rational.h"

namespace dispersal::mdp {

/// Bounded integer variable. Booleans are declared as [0..1].
struct VariableDecl {
    std::string name;
    int low = 0;
    int high = 0;
    int init = 0;
};

struct Assignment {
    std::string variable;
    Expr value;
};

/// One probabilistic outcome of a template: all assignments happen simultaneously.
struct Branch {
    Rational probability;
    std::vector<Assignment> assignments;
};

/// A guarded command `[action] guard -> p1:u1 + ... + pk:uk`. Instantiated against a
/// state satisfying the guard it yields one explicit distribution.
struct TransitionTemplate {
    std::string action;
    Expr guard;
    std::vector<Branch> branches;
};

struct Module {
    std::string name;
    std::vector<VariableDecl> variables;
    std::vector<TransitionTemplate> templates;

    /// Distinct action names in template order.
    std::vector<std::string> alphabet() const;
    const VariableDecl* find_variable(const std::string& variable) const;
};

/// Atomic proposition `name` holds in a state iff `condition` evaluates nonzero.
struct PropositionRule {
    std::string name;
    Expr condition;
};

}  // namespace dispersal::mdp
