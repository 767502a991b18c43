#pragma once

#include <set>
#include <string>
#include <vector>

#include "dispersal/mdp/mdp.h"
#include "dispersal/mdp/module.h"
#include "dispersal/models/params.h"

namespace dispersal::models {

enum class Attacker { Slice, Provider };
enum class ClientKind { Full, Abstract };

std::string to_string(Attacker attacker);
Attacker parse_attacker(const std::string& text);
std::string to_string(ClientKind kind);
ClientKind parse_client_kind(const std::string& text);

inline constexpr const char* kBusy = "busy";
inline constexpr const char* kHacked = "hacked";

// Client program counter.
inline constexpr int kClientPick = 0;
inline constexpr int kClientSend = 1;
inline constexpr int kClientDone = 2;

// Slice attacker program counter.
inline constexpr int kSliceListen = 0;
inline constexpr int kSliceAttempt = 1;
inline constexpr int kSliceDone = 2;

/// ProviderAtt: pc_a in [0, m) tosses coins, m listens, m+1 is done, m+2 failed.
inline int provider_done(int servers) { return servers + 1; }
inline int provider_failed(int servers) { return servers + 2; }

/// Client: picks server i with mass p_i, sends on `busy` if the server has room, otherwise
/// retries; finishes once all n slices are sent.
mdp::Module build_client(const ModelParams& params);

/// Client without per-server counters or capacity checks. Requires c >= n (PreconditionError).
mdp::Module build_client_prime(const ModelParams& params);

/// Eavesdropper intercepting each slice sent to server i with probability a_i.
mdp::Module build_slice_attacker(const ModelParams& params);

/// Intruder that first breaks into each provider with probability a_i, then collects every
/// slice routed to a broken provider and makes one reconstruction attempt after the client
/// has sent all slices.
mdp::Module build_provider_attacker(const ModelParams& params);

/// `hacked` iff the attacker's pc_a is its done value.
mdp::PropositionRule hacked_rule(Attacker attacker, const ModelParams& params);

/// Client and attacker kept as separate modules (for export) plus composition metadata.
struct ModelProgram {
    std::vector<mdp::Module> modules;
    std::set<std::string> shared;
    std::vector<mdp::PropositionRule> labels;

    mdp::Module flatten() const;
    /// Named parameters appearing anywhere in the program, in first-use order.
    std::vector<std::pair<std::string, int>> constants() const;
};

ModelProgram build_program(const ModelParams& params, Attacker attacker, ClientKind client = ClientKind::Full);

/// Explicit Client || attacker MDP.
mdp::Mdp build_mdp(const ModelParams& params, Attacker attacker, ClientKind client = ClientKind::Full);

}  // namespace dispersal::models
