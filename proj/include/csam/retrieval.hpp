#pragma once

// Whole-message retrieval from corrupted probes. Every algorithm returns a
// RetrievalOutcome; `message` is present only when the run ends in a clean
// one-neuron-per-cluster assignment, and `clique` carries the winning
// members. `converged` goes false only when an iteration cap cut a run
// short (direct's fixed-point cap, direct-plus's safety cap); exhaustive
// searches that end empty-handed are definitive and stay converged.
//
//   direct        iterate individual-signal winner-take-all, decode.
//   direct-plus   iterate clusterwise winner-take-all until the state
//                 repeats (safety cap: one iteration per neuron), then
//                 search the active set for a clique.
//   construct     grow the active set neuron by neuron; each round searches
//                 the neurons with a full clusterwise score inside the
//                 active-restricted adjacency, then subjoins every inactive
//                 neuron whose score reaches the running maximum of the
//                 scan (ascending index, first one always taken).
//   delegate      score the probe once, drop every cluster whose winner set
//                 differs from the probe's slice, complete the dropped
//                 clusters jointly, then clique-search the still-ambiguous
//                 ones.
//   cut-and-paste enumerate the cliques inside the probe, rank them, and
//                 paste each in turn: activate missing-cluster neurons
//                 adjacent to the whole fragment, clique-search, first hit
//                 wins.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "csam/clique_search.hpp"
#include "csam/dynamics.hpp"
#include "csam/memory.hpp"
#include "csam/network.hpp"

namespace csam {

enum class Algorithm {
    Direct,
    DirectPlus,
    Construct,
    Delegate,
    CutAndPaste,
    Erasure,
};

const char* algorithm_tag(Algorithm a);
std::optional<Algorithm> algorithm_from_tag(std::string_view tag);

enum class ScoringRule { Individual, Clusterwise };

struct RetrievalOutcome {
    std::optional<Clique> clique;
    std::optional<Message> message;
    uint32_t iterations = 0;
    std::chrono::duration<double> elapsed{0};
    Algorithm algorithm = Algorithm::Direct;
    bool converged = true;
};

struct ConstructOptions {
    bool incremental_scores = true;    // rescore only neurons still below full signal
    bool incremental_adjacency = true; // update only new rows/columns of the
                                       // active-restricted adjacency
};

RetrievalOutcome retrieve_direct(const CliqueMemory& mem, const ActivationState& probe,
                                 const RetrievalParams& params = {});
RetrievalOutcome retrieve_direct_plus(const CliqueMemory& mem, const ActivationState& probe);
RetrievalOutcome retrieve_construct(const CliqueMemory& mem, const ActivationState& probe,
                                    const ConstructOptions& options = {});
RetrievalOutcome retrieve_delegate(const CliqueMemory& mem, const ActivationState& probe,
                                   ScoringRule first_pass = ScoringRule::Individual);
RetrievalOutcome retrieve_cut_and_paste(const CliqueMemory& mem, const ActivationState& probe,
                                        ScoringRule paste_scoring = ScoringRule::Individual);

// Known symbols pinned, unknown positions completed jointly, leftover
// ambiguity resolved by clique search.
RetrievalOutcome retrieve_erasure(const CliqueMemory& mem, const PartialMessage& partial);

// Dispatch for the five probe-driven algorithms; Algorithm::Erasure is not
// dispatchable here (it needs a partial message, not a probe state).
RetrievalOutcome retrieve(const CliqueMemory& mem, const ActivationState& probe,
                          Algorithm algorithm, const RetrievalParams& params = {});

} // namespace csam
