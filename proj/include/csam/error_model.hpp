#pragma once

// Probe corruption. A spec describes which clusters suffer which of the
// three primitives; injection is deterministic in the spec's seed.
//
// Order of application: shifts first (each affected cluster independently
// swaps its symbol, with probability `probability`, for a uniformly random
// different one), then omissions (the cluster goes silent), then insertions
// (extra activations on top). A light insertion activates `count` neurons
// at fixed positions, local index 0 upwards, skipping the position already
// active in that cluster; a heavy insertion activates the whole cluster.
//
// Seed contract (stable; serialized specs reproduce probes bit-for-bit):
// one SplitMix64 stream seeded with `seed`. If shift.random_count > 0 the
// affected clusters are drawn first (next_below(cluster_count) until that
// many are distinct, then sorted); shifted clusters are processed in
// ascending order, each drawing next_double() against the probability and,
// only when the shift fires, next_below(neurons_per_cluster - 1) with the
// original symbol skipped by shifting the draw up past it.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csam/dynamics.hpp"
#include "csam/network.hpp"

namespace csam {

struct InsertionSpec {
    uint32_t cluster = 0;
    bool heavy = false;
    uint32_t count = 1; // ignored for heavy
};

struct ShiftSpec {
    bool all_clusters = false;
    std::vector<uint32_t> clusters; // ascending, unique; unused when all_clusters
    uint32_t random_count = 0;      // >0: sample this many distinct clusters per probe
    double probability = 0.0;
};

struct ErrorSpec {
    std::vector<InsertionSpec> insertions; // unique clusters
    std::vector<uint32_t> omissions;       // ascending, unique
    ShiftSpec shift;
    uint64_t seed = 0;

    void validate(const NetworkConfig& cfg) const; // throws std::invalid_argument

    // flat key-value form used by config files and benchmark CSV metadata
    std::vector<std::pair<std::string, std::string>> to_keys() const;
    static ErrorSpec from_keys(const std::map<std::string, std::string>& keys);
};

ActivationState inject(const NetworkConfig& cfg, const Message& msg, const ErrorSpec& spec);

// Blank the pattern's positions; the pattern comes back alongside so
// callers keep the (partial message, missing clusters) pair together.
std::pair<PartialMessage, ErasurePattern> erase(const Message& msg,
                                                const ErasurePattern& pattern);

} // namespace csam
