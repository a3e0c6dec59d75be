#pragma once

// Iterative retrieval dynamics over a stored memory.
//
// Individual signals (sum-of-sum): a neuron's score counts every active
// neuron it is connected to; the all-ones diagonal supplies the self term.
// The update keeps, per cluster, all neurons tied at the cluster maximum --
// including the degenerate case where every score in a cluster is 0 and the
// whole cluster activates.
//
// Clusterwise signals (sum-of-max): a source cluster contributes at most one
// signal, namely 1 if it holds any active neuron adjacent to the target.
// The target's own cluster contributes only through the diagonal, so an
// inactive neuron caps at cluster_count - 1. The update keeps a neuron
// active only while its score reaches cluster_count; inactive neurons never
// come back, so activity shrinks monotonically to a fixed point.

#include <cstdint>
#include <vector>

#include "csam/memory.hpp"
#include "csam/network.hpp"

namespace csam {

using ScoreVector = std::vector<int32_t>;

struct RetrievalParams {
    uint32_t max_iterations = 10;
    // reinforcement factor on the self term; anything but 1 is untested
    // territory and deliberately not configurable
    static constexpr int32_t reinforcement = 1;
};

enum class Dynamics { SumOfSum, SumOfMax };

struct ErasurePattern {
    std::vector<uint32_t> missing_clusters; // sorted, unique

    bool contains(uint32_t c) const;
    void validate(const NetworkConfig& cfg) const; // throws std::invalid_argument
};

ScoreVector individual_scores(const CliqueMemory& mem, const ActivationState& state);
ScoreVector clusterwise_scores(const CliqueMemory& mem, const ActivationState& state);
int32_t clusterwise_score(const CliqueMemory& mem, const ActivationState& state, uint32_t neuron);

// all neurons tied at their cluster's maximum score become active
ActivationState cluster_winners(const NetworkConfig& cfg, const ScoreVector& scores);

struct StepResult {
    ScoreVector scores;
    ActivationState next;
};

StepResult sum_of_sum_step(const CliqueMemory& mem, const ActivationState& state);
StepResult sum_of_max_step(const CliqueMemory& mem, const ActivationState& state);

// Probe for a partially erased message: known clusters activate the
// message's neuron. Missing clusters start all-active under SumOfSum
// (anyone could win) and all-inactive under SumOfMax (activity only
// shrinks, so seeding happens elsewhere).
ActivationState init_erasure(const NetworkConfig& cfg, const Message& msg,
                             const ErasurePattern& pattern, Dynamics scheme);

struct FixedPointResult {
    ActivationState state;
    uint32_t iterations = 0;
    bool converged = false;
};

// Applies the chosen step until the state repeats or max_iterations is
// reached; iterations counts applied steps including the confirming one.
FixedPointResult run_until_fixed(const CliqueMemory& mem, ActivationState state,
                                 const RetrievalParams& params, Dynamics dynamics);

struct JointResult {
    ActivationState state;
    uint32_t iterations = 0;
};

// Completion of missing clusters with known clusters pinned: one individual-
// signal pass seeds every missing-cluster neuron whose score is exactly
// cluster_count - |missing|, then clusterwise elimination restricted to the
// missing clusters runs to a fixed point. Known clusters never change; an
// empty pattern returns the probe untouched.
JointResult joint_with_stats(const CliqueMemory& mem, const ActivationState& probe,
                             const ErasurePattern& pattern);
ActivationState joint(const CliqueMemory& mem, const ActivationState& probe,
                      const ErasurePattern& pattern);

} // namespace csam
