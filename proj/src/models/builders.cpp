#include "dispersal/models/builders.h"

#include "dispersal/errors.h"
#include "dispersal/mdp/compose.h"
#include "dispersal/mdp/explore.h"

namespace dispersal::models {

using mdp::Assignment;
using mdp::Branch;
using mdp::Expr;
using mdp::TransitionTemplate;

namespace {

Expr var(const std::string& name) { return Expr::var(name); }
Expr lit(int value) { return Expr::literal(value); }

std::string server_var(const std::string& stem, int i) { return stem + "_" + std::to_string(i); }

Assignment set(const std::string& variable, Expr value) { return Assignment{variable, std::move(value)}; }
Assignment inc(const std::string& variable) { return Assignment{variable, var(variable) + 1}; }

/// Two-way probabilistic split, dropping a branch whose mass is 0.
std::vector<Branch> split(const Rational& p, std::vector<Assignment> hit, std::vector<Assignment> miss) {
    std::vector<Branch> out;
    if (p > 0) out.push_back(Branch{p, std::move(hit)});
    if (p < 1) out.push_back(Branch{1 - p, std::move(miss)});
    return out;
}

struct Params {
    Expr n, m, c, k1, k2;
};

Params named(const ModelParams& p) {
    return {Expr::param("n", p.slices), Expr::param("m", p.servers), Expr::param("c", p.capacity),
            Expr::param("k1", p.k1), Expr::param("k2", p.k2)};
}

mdp::Module client_module(const ModelParams& params, bool with_server_counters) {
    const Params k = named(params);
    mdp::Module mod;
    mod.name = "client";
    mod.variables = {{"pc_c", 0, kClientDone, 0}, {"s_c", 0, params.servers, 0}, {"ctr_c", 0, params.slices, 0}};
    if (with_server_counters)
        for (int i = 1; i <= params.servers; ++i)
            mod.variables.push_back({server_var("ctr_c", i), 0, params.capacity, 0});

    TransitionTemplate pick{"pick", eq(var("pc_c"), kClientPick) && lt(var("ctr_c"), k.n), {}};
    for (int i = 1; i <= params.servers; ++i) {
        const Rational& p = params.routing[static_cast<std::size_t>(i - 1)];
        if (p > 0) pick.branches.push_back(Branch{p, {set("pc_c", lit(kClientSend)), set("s_c", lit(i))}});
    }
    mod.templates.push_back(std::move(pick));

    for (int i = 1; i <= params.servers; ++i) {
        Expr guard = eq(var("pc_c"), kClientSend) && eq(var("s_c"), i);
        std::vector<Assignment> sent = {set("pc_c", lit(kClientPick)), set("s_c", lit(0)), inc("ctr_c")};
        if (with_server_counters) {
            const std::string counter = server_var("ctr_c", i);
            sent.push_back(inc(counter));
            mod.templates.push_back({kBusy, guard && lt(var(counter), k.c), {Branch{1, sent}}});
            mod.templates.push_back(
                {"retry", guard && ge(var(counter), k.c),
                 {Branch{1, {set("pc_c", lit(kClientPick)), set("s_c", lit(0))}}}});
        } else {
            mod.templates.push_back({kBusy, guard, {Branch{1, sent}}});
        }
    }

    mod.templates.push_back(
        {"finish", eq(var("pc_c"), kClientPick) && eq(var("ctr_c"), k.n), {Branch{1, {set("pc_c", lit(kClientDone))}}}});
    return mod;
}

}  // namespace

std::string to_string(Attacker attacker) { return attacker == Attacker::Slice ? "slice" : "provider"; }

Attacker parse_attacker(const std::string& text) {
    if (text == "slice") return Attacker::Slice;
    if (text == "provider") return Attacker::Provider;
    throw ParameterError("unknown attacker '" + text + "' (expected slice or provider)");
}

std::string to_string(ClientKind kind) { return kind == ClientKind::Full ? "full" : "abstract"; }

ClientKind parse_client_kind(const std::string& text) {
    if (text == "full") return ClientKind::Full;
    if (text == "abstract") return ClientKind::Abstract;
    throw ParameterError("unknown client kind '" + text + "' (expected full or abstract)");
}

mdp::Module build_client(const ModelParams& params) {
    require_valid(params);
    return client_module(params, true);
}

mdp::Module build_client_prime(const ModelParams& params) {
    require_valid(params);
    if (params.capacity < params.slices)
        throw PreconditionError("abstract client needs c >= n (c = " + std::to_string(params.capacity) +
                                ", n = " + std::to_string(params.slices) + ")");
    return client_module(params, false);
}

mdp::Module build_slice_attacker(const ModelParams& params) {
    require_valid(params);
    const Params k = named(params);
    const Expr done = Expr::param("done", kSliceDone);
    mdp::Module mod;
    mod.name = "slice_attacker";
    mod.variables = {{"pc_a", 0, kSliceDone, kSliceListen}, {"ctr_a", 0, params.slices, 0}};

    const Expr listening = eq(var("pc_a"), kSliceListen);
    for (int i = 1; i <= params.servers; ++i) {
        const Rational& a = params.attack[static_cast<std::size_t>(i - 1)];
        const Expr base = listening && eq(var("s_c"), i);
        // Still collecting the first k1 - 1 slices.
        if (params.k1 >= 2)
            mod.templates.push_back({kBusy, base && lt(var("ctr_a"), k.k1 - 1), split(a, {inc("ctr_a")}, {})});
        // The interception reaches some j in [k1, k2): try to reconstruct next.
        if (params.k1 < params.k2)
            mod.templates.push_back({kBusy, base && ge(var("ctr_a"), k.k1 - 1) && lt(var("ctr_a"), k.k2 - 1),
                                     split(a, {inc("ctr_a"), set("pc_a", lit(kSliceAttempt))}, {})});
        // The k2-th interception reveals the message outright.
        mod.templates.push_back(
            {kBusy, base && eq(var("ctr_a"), k.k2 - 1), split(a, {inc("ctr_a"), set("pc_a", done)}, {})});
    }
    for (int j = params.k1; j < params.k2; ++j)
        mod.templates.push_back({"reconstruct", eq(var("pc_a"), kSliceAttempt) && eq(var("ctr_a"), j),
                                 split(params.x(j), {set("pc_a", done)}, {set("pc_a", lit(kSliceListen))})});
    return mod;
}

mdp::Module build_provider_attacker(const ModelParams& params) {
    require_valid(params);
    const Params k = named(params);
    const int m = params.servers;
    const Expr done = Expr::param("done", provider_done(m));
    const Expr failed = Expr::param("failed", provider_failed(m));
    mdp::Module mod;
    mod.name = "provider_attacker";
    mod.variables = {{"pc_a", 0, provider_failed(m), 0}, {"ctr_a", 0, params.slices, 0}};
    for (int i = 1; i <= m; ++i) mod.variables.push_back({server_var("att_a", i), 0, 1, 0});

    for (int i = 1; i <= m; ++i) {
        const Rational& a = params.attack[static_cast<std::size_t>(i - 1)];
        mod.templates.push_back({"toss", eq(var("pc_a"), lit(i - 1)),
                                 split(a, {set(server_var("att_a", i), lit(1)), set("pc_a", lit(i))},
                                       {set("pc_a", lit(i))})});
    }
    const Expr listening = eq(var("pc_a"), k.m);
    for (int i = 1; i <= m; ++i) {
        const Expr base = listening && eq(var("s_c"), i);
        mod.templates.push_back({kBusy, base && eq(var(server_var("att_a", i)), 1), {Branch{1, {inc("ctr_a")}}}});
        mod.templates.push_back({kBusy, base && eq(var(server_var("att_a", i)), 0), {Branch{1, {}}}});
    }
    const Expr finished = listening && eq(var("ctr_c"), k.n);
    mod.templates.push_back({"attempt", finished && lt(var("ctr_a"), k.k1), {Branch{1, {set("pc_a", failed)}}}});
    for (int j = params.k1; j <= params.slices; ++j)
        mod.templates.push_back({"attempt", finished && eq(var("ctr_a"), j),
                                 split(params.x(j), {set("pc_a", done)}, {set("pc_a", failed)})});
    return mod;
}

mdp::PropositionRule hacked_rule(Attacker attacker, const ModelParams& params) {
    const int done = attacker == Attacker::Slice ? kSliceDone : provider_done(params.servers);
    return {kHacked, eq(var("pc_a"), Expr::param("done", done))};
}

mdp::Module ModelProgram::flatten() const {
    mdp::Module out = modules.at(0);
    for (std::size_t i = 1; i < modules.size(); ++i) out = mdp::compose(out, modules[i], shared);
    return out;
}

std::vector<std::pair<std::string, int>> ModelProgram::constants() const {
    std::vector<std::pair<std::string, int>> out;
    for (const auto& mod : modules)
        for (const auto& t : mod.templates) {
            t.guard.collect_params(out);
            for (const auto& b : t.branches)
                for (const auto& a : b.assignments) a.value.collect_params(out);
        }
    for (const auto& l : labels) l.condition.collect_params(out);
    return out;
}

ModelProgram build_program(const ModelParams& params, Attacker attacker, ClientKind client) {
    ModelProgram program;
    program.modules.push_back(client == ClientKind::Full ? build_client(params) : build_client_prime(params));
    program.modules.push_back(attacker == Attacker::Slice ? build_slice_attacker(params)
                                                          : build_provider_attacker(params));
    program.shared = {kBusy};
    program.labels = {hacked_rule(attacker, params)};
    return program;
}

mdp::Mdp build_mdp(const ModelParams& params, Attacker attacker, ClientKind client) {
    ModelProgram program = build_program(params, attacker, client);
    return mdp::expand(program.flatten(), program.labels);
}

}  // namespace dispersal::models
