#include "dispersal/mdp/mdp.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "dispersal/errors.h"

namespace dispersal::mdp {

std::vector<std::string> Module::alphabet() const {
    std::vector<std::string> out;
    for (const auto& t : templates)
        if (std::find(out.begin(), out.end(), t.action) == out.end()) out.push_back(t.action);
    return out;
}

const VariableDecl* Module::find_variable(const std::string& variable) const {
    for (const auto& v : variables)
        if (v.name == variable) return &v;
    return nullptr;
}

VariableLayout::VariableLayout(std::vector<VariableDecl> variables) : variables_(std::move(variables)) {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        for (std::size_t j = i + 1; j < variables_.size(); ++j)
            if (variables_[i].name == variables_[j].name)
                throw ModelError("variable '" + variables_[i].name + "' declared twice");
}

int VariableLayout::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return static_cast<int>(i);
    return -1;
}

Valuation::Valuation(std::shared_ptr<const VariableLayout> layout, std::vector<int> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
    if (values_.size() != layout_->size()) throw std::invalid_argument("valuation does not match its layout");
}

int Valuation::operator[](std::string_view name) const {
    int i = layout_->index_of(name);
    if (i < 0) throw std::out_of_range("no variable '" + std::string(name) + "'");
    return values_[static_cast<std::size_t>(i)];
}

std::string Valuation::to_string() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out << ", ";
        out << (*layout_)[i].name << '=' << values_[i];
    }
    out << ')';
    return out.str();
}

void Distribution::add(StateId target, const Rational& mass) {
    for (auto& [t, p] : outcomes) {
        if (t == target) {
            p += mass;
            return;
        }
    }
    outcomes.emplace_back(target, mass);
}

Rational Distribution::total() const {
    Rational sum = 0;
    for (const auto& [t, p] : outcomes) sum += p;
    return sum;
}

std::vector<std::pair<StateId, double>> Distribution::to_double() const {
    std::vector<std::pair<StateId, double>> out;
    out.reserve(outcomes.size());
    for (const auto& [t, p] : outcomes) out.emplace_back(t, p.get_d());
    return out;
}

std::size_t Mdp::VectorHash::operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : v) {
        h ^= static_cast<std::size_t>(static_cast<unsigned>(x)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Mdp::Mdp(std::shared_ptr<const VariableLayout> layout) : layout_(std::move(layout)) {}

StateId Mdp::intern_state(const std::vector<int>& values) {
    if (values.size() != layout_->size()) throw std::invalid_argument("state does not match layout");
    auto [it, inserted] = index_.try_emplace(values, static_cast<StateId>(values_.size()));
    if (inserted) {
        values_.push_back(values);
        choices_.emplace_back();
        labels_.push_back(0);
    }
    return it->second;
}

std::optional<StateId> Mdp::find_state(const std::vector<int>& values) const {
    auto it = index_.find(values);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int Mdp::value_of(StateId s, std::string_view variable) const {
    int i = layout_->index_of(variable);
    if (i < 0) throw std::out_of_range("no variable '" + std::string(variable) + "'");
    return values_[s][static_cast<std::size_t>(i)];
}

ActionId Mdp::intern_action(const std::string& name) {
    if (auto a = find_action(name)) return *a;
    actions_.push_back(name);
    return static_cast<ActionId>(actions_.size() - 1);
}

std::optional<ActionId> Mdp::find_action(std::string_view name) const {
    for (std::size_t i = 0; i < actions_.size(); ++i)
        if (actions_[i] == name) return static_cast<ActionId>(i);
    return std::nullopt;
}

void Mdp::set_choice(StateId s, ActionId action, Distribution distribution) {
    auto& list = choices_.at(s);
    for (auto& c : list) {
        if (c.action == action) {
            c.distribution = std::move(distribution);
            return;
        }
    }
    list.push_back(Choice{action, std::move(distribution)});
}

std::size_t Mdp::num_transitions() const {
    std::size_t count = 0;
    for (const auto& list : choices_)
        for (const auto& c : list)
            for (const auto& [t, p] : c.distribution.outcomes)
                if (p > 0) ++count;
    return count;
}

std::size_t Mdp::intern_proposition(const std::string& name) {
    if (auto p = find_proposition(name)) return *p;
    if (propositions_.size() == 64) throw ModelError("at most 64 atomic propositions are supported");
    propositions_.push_back(name);
    return propositions_.size() - 1;
}

std::optional<std::size_t> Mdp::find_proposition(std::string_view name) const {
    for (std::size_t i = 0; i < propositions_.size(); ++i)
        if (propositions_[i] == name) return i;
    return std::nullopt;
}

void Mdp::add_label(StateId s, std::size_t proposition) { labels_.at(s) |= (std::uint64_t{1} << proposition); }

bool Mdp::has_label(StateId s, std::size_t proposition) const { return (labels_[s] >> proposition) & 1U; }

std::vector<Violation> validate(const Mdp& m) {
    std::vector<Violation> out;
    const auto n = m.num_states();
    for (StateId s = 0; s < n; ++s) {
        for (const Choice& c : m.choices(s)) {
            Rational total = 0;
            for (const auto& [t, p] : c.distribution.outcomes) {
                if (t >= n)
                    out.push_back({"target " + std::to_string(t) + " of action '" + m.actions()[c.action] +
                                       "' in state " + std::to_string(s) + " is not a state",
                                   s, c.action});
                if (p < 0 || p > 1)
                    out.push_back({"mass " + to_string(p) + " of action '" + m.actions()[c.action] + "' in state " +
                                       std::to_string(s) + " is not a probability",
                                   s, c.action});
                total += p;
            }
            if (total != 0 && total != 1)
                out.push_back({"mass " + to_string(total) + " ∉ {0,1} for action '" + m.actions()[c.action] +
                                   "' in state " + std::to_string(s),
                               s, c.action});
        }
    }
    Rational init_total = 0;
    for (const auto& [t, p] : m.initial().outcomes) {
        if (t >= n) out.push_back({"initial target " + std::to_string(t) + " is not a state", std::nullopt, std::nullopt});
        init_total += p;
    }
    if (init_total != 1)
        out.push_back({"initial mass " + to_string(init_total) + " ≠ 1", std::nullopt, std::nullopt});
    return out;
}

}  // namespace dispersal::mdp
