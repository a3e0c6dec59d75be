#pragma once

// Clique search over the cluster-partitioned graph.
//
// find_clique picks one neuron from every candidate set or reports that no
// fully connected choice exists. Depth-first with two deterministic
// orderings: inside the set being expanded, candidates go in ascending
// frequency (ties by ascending index) so rarely used neurons -- the ones
// whose edges pin down a clique fastest -- are tried first; after a pick,
// the surviving deeper sets are re-sorted by ascending size (ties by
// ascending cluster index) so the tightest set is expanded next. Any empty
// deeper set prunes the branch. The first clique found wins.
//
// enumerate_probe_cliques lists every clique (one neuron per cluster, all
// pairwise edges stored) inside a probe's active set by growing smaller
// cliques one active neuron at a time, deduplicating on the member set.
// Singletons count as cliques.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csam/memory.hpp"
#include "csam/network.hpp"

namespace csam {

struct ClusterPartition {
    struct Set {
        uint32_t cluster = 0;
        std::vector<uint32_t> neurons; // global indices, all inside `cluster`
    };
    std::vector<Set> sets;
};

// one set per cluster (ascending), holding the state's active neurons
ClusterPartition partition_from_state(const ActivationState& state);

std::optional<Clique> find_clique(const BitMatrix& adjacency,
                                  std::span<const uint32_t> frequency,
                                  const NetworkConfig& cfg,
                                  const ClusterPartition& partition);

inline std::optional<Clique> find_clique(const CliqueMemory& mem,
                                         const ClusterPartition& partition) {
    return find_clique(mem.adjacency(), mem.frequency(), mem.config(), partition);
}

using CliqueList = std::vector<Clique>;

CliqueList enumerate_probe_cliques(const CliqueMemory& mem, const ActivationState& probe);

// Largest first; ties by higher member frequency sum, then lexicographic
// member order. Fully deterministic.
CliqueList rank_cliques(CliqueList cliques, const NetworkConfig& cfg,
                        std::span<const uint32_t> frequency);

} // namespace csam
