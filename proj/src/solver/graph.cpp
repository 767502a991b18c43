#include "graph.h"

namespace dispersal::solver::detail {

ChoiceGraph::ChoiceGraph(const mdp::Mdp& m) {
    const std::size_t n = m.num_states();
    state_begin.reserve(n + 1);
    choice_begin.push_back(0);
    for (mdp::StateId s = 0; s < n; ++s) {
        state_begin.push_back(choice_state.size());
        for (const mdp::Choice& c : m.choices(s)) {
            bool any = false;
            for (const auto& [t, p] : c.distribution.outcomes) {
                if (p <= 0) continue;
                successor.push_back(t);
                probability.push_back(p.get_d());
                any = true;
            }
            if (!any) continue;
            choice_state.push_back(s);
            choice_source.push_back(&c);
            choice_begin.push_back(successor.size());
        }
    }
    state_begin.push_back(choice_state.size());

    std::vector<std::size_t> count(n + 1, 0);
    for (std::size_t c = 0; c < num_choices(); ++c)
        for (std::size_t e = choice_begin[c]; e < choice_begin[c + 1]; ++e) ++count[successor[e] + 1];
    pred_begin.assign(n + 1, 0);
    for (std::size_t t = 0; t < n; ++t) pred_begin[t + 1] = pred_begin[t] + count[t + 1];
    pred_choice.resize(pred_begin[n]);
    std::vector<std::size_t> fill(pred_begin.begin(), pred_begin.end() - 1);
    for (std::size_t c = 0; c < num_choices(); ++c)
        for (std::size_t e = choice_begin[c]; e < choice_begin[c + 1]; ++e) pred_choice[fill[successor[e]]++] = c;
}

}  // namespace dispersal::solver::detail
