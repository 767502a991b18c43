#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dispersal/mdp/module.h"
#include "dispersal/rational.h"

namespace dispersal::mdp {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

/// Ordered variable declarations shared by all states of one model.
class VariableLayout {
  public:
    explicit VariableLayout(std::vector<VariableDecl> variables);

    std::size_t size() const { return variables_.size(); }
    const std::vector<VariableDecl>& variables() const { return variables_; }
    const VariableDecl& operator[](std::size_t i) const { return variables_[i]; }
    /// -1 when absent.
    int index_of(std::string_view name) const;

  private:
    std::vector<VariableDecl> variables_;
};

/// A state as a full assignment of the layout's variables.
class Valuation {
  public:
    Valuation(std::shared_ptr<const VariableLayout> layout, std::vector<int> values);

    const VariableLayout& layout() const { return *layout_; }
    const std::vector<int>& values() const { return values_; }
    /// Throws std::out_of_range for undeclared variables.
    int operator[](std::string_view name) const;
    std::string to_string() const;

    friend bool operator==(const Valuation& a, const Valuation& b) { return a.values_ == b.values_; }

  private:
    std::shared_ptr<const VariableLayout> layout_;
    std::vector<int> values_;
};

/// Finitely supported probability mass over state indices.
struct Distribution {
    std::vector<std::pair<StateId, Rational>> outcomes;

    /// Adds mass to `target`, merging with an existing entry.
    void add(StateId target, const Rational& mass);
    Rational total() const;
    std::vector<std::pair<StateId, double>> to_double() const;
};

/// The distribution Pr(s, action, .) of one enabled action.
struct Choice {
    ActionId action;
    Distribution distribution;
};

/// Explicit-state MDP (S, Act, Pr, iota, L). Built by `expand`/`compose` or by hand; the
/// invariants are checked by `validate`, not enforced on mutation, so malformed models can
/// be represented and diagnosed.
class Mdp {
  public:
    explicit Mdp(std::shared_ptr<const VariableLayout> layout);

    const std::shared_ptr<const VariableLayout>& layout() const { return layout_; }

    /// Adds a state or returns the existing one with the same valuation.
    StateId intern_state(const std::vector<int>& values);
    std::optional<StateId> find_state(const std::vector<int>& values) const;
    std::size_t num_states() const { return values_.size(); }
    const std::vector<int>& state_values(StateId s) const { return values_[s]; }
    Valuation valuation(StateId s) const { return Valuation(layout_, values_[s]); }
    int value_of(StateId s, std::string_view variable) const;

    ActionId intern_action(const std::string& name);
    std::optional<ActionId> find_action(std::string_view name) const;
    const std::vector<std::string>& actions() const { return actions_; }

    /// Replaces any existing distribution for (s, action).
    void set_choice(StateId s, ActionId action, Distribution distribution);
    const std::vector<Choice>& choices(StateId s) const { return choices_[s]; }
    /// Number of (s, action, s') triples with positive mass.
    std::size_t num_transitions() const;

    void set_initial(Distribution initial) { initial_ = std::move(initial); }
    const Distribution& initial() const { return initial_; }

    std::size_t intern_proposition(const std::string& name);
    std::optional<std::size_t> find_proposition(std::string_view name) const;
    const std::vector<std::string>& propositions() const { return propositions_; }
    void add_label(StateId s, std::size_t proposition);
    bool has_label(StateId s, std::size_t proposition) const;
    /// Bitmask over propositions() (at most 64 propositions).
    std::uint64_t label_mask(StateId s) const { return labels_[s]; }

  private:
    struct VectorHash {
        std::size_t operator()(const std::vector<int>& v) const noexcept;
    };

    std::shared_ptr<const VariableLayout> layout_;
    std::vector<std::vector<int>> values_;
    std::unordered_map<std::vector<int>, StateId, VectorHash> index_;
    std::vector<std::string> actions_;
    std::vector<std::vector<Choice>> choices_;
    Distribution initial_;
    std::vector<std::string> propositions_;
    std::vector<std::uint64_t> labels_;
};

struct Violation {
    std::string message;
    std::optional<StateId> state;   // empty for the initial distribution
    std::optional<ActionId> action;
};

/// Checks the MDP invariants: each enabled distribution and the initial distribution sum to
/// exactly 1 and every target is a state. Empty result iff well formed.
std::vector<Violation> validate(const Mdp& m);

}  // namespace dispersal::mdp
