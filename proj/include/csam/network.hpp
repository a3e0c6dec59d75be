#pragma once

// Network topology and message coding. The network has cluster_count
// clusters of neurons_per_cluster neurons each; a message assigns one
// symbol (= one local neuron index) to every cluster. Activation states
// are arbitrary subsets of the neurons.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "csam/bits.hpp"

namespace csam {

struct NetworkConfig {
    uint32_t cluster_count = 0;
    uint32_t neurons_per_cluster = 0;

    NetworkConfig() = default;
    NetworkConfig(uint32_t clusters, uint32_t neurons)
        : cluster_count(clusters), neurons_per_cluster(neurons) {
        if (clusters < 2 || neurons < 2)
            throw std::invalid_argument("network needs at least 2 clusters of 2 neurons");
    }

    uint32_t total_neurons() const { return cluster_count * neurons_per_cluster; }

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct NeuronRef {
    uint32_t cluster = 0;
    uint32_t local = 0;

    friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

inline uint32_t global_index(const NetworkConfig& cfg, NeuronRef ref) {
    return ref.cluster * cfg.neurons_per_cluster + ref.local;
}

inline NeuronRef neuron_at(const NetworkConfig& cfg, uint32_t global) {
    return {global / cfg.neurons_per_cluster, global % cfg.neurons_per_cluster};
}

struct Message {
    std::vector<uint32_t> symbols;

    bool valid_for(const NetworkConfig& cfg) const {
        if (symbols.size() != cfg.cluster_count) return false;
        for (uint32_t s : symbols)
            if (s >= cfg.neurons_per_cluster) return false;
        return true;
    }

    friend bool operator==(const Message&, const Message&) = default;
};

// A message with some symbols unknown (erased positions).
struct PartialMessage {
    std::vector<std::optional<uint32_t>> symbols;
};

class ActivationState {
public:
    ActivationState() = default;
    explicit ActivationState(const NetworkConfig& cfg)
        : cfg_(cfg), bits_(cfg.total_neurons()) {}

    const NetworkConfig& config() const { return cfg_; }

    bool test(uint32_t global) const { return bits_.test(global); }
    void set(uint32_t global) { bits_.set(global); }
    void reset(uint32_t global) { bits_.reset(global); }

    uint32_t active_count() const { return bits_.count(); }

    uint32_t cluster_active_count(uint32_t c) const {
        return bits_.count_in_range(c * cfg_.neurons_per_cluster, cfg_.neurons_per_cluster);
    }

    // local index if the cluster has exactly one active neuron
    std::optional<uint32_t> cluster_sole_active(uint32_t c) const {
        uint32_t base = c * cfg_.neurons_per_cluster;
        std::optional<uint32_t> found;
        for (uint32_t l = 0; l < cfg_.neurons_per_cluster; ++l) {
            if (!bits_.test(base + l)) continue;
            if (found) return std::nullopt;
            found = l;
        }
        return found;
    }

    void clear_cluster(uint32_t c) {
        bits_.reset_range(c * cfg_.neurons_per_cluster, cfg_.neurons_per_cluster);
    }

    BitVec& bits() { return bits_; }
    const BitVec& bits() const { return bits_; }

    friend bool operator==(const ActivationState&, const ActivationState&) = default;

private:
    NetworkConfig cfg_;
    BitVec bits_;
};

// throws std::invalid_argument on an out-of-range symbol
inline ActivationState encode(const NetworkConfig& cfg, const Message& msg) {
    if (!msg.valid_for(cfg))
        throw std::invalid_argument("message does not fit the network");
    ActivationState state(cfg);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c)
        state.set(global_index(cfg, {c, msg.symbols[c]}));
    return state;
}

// nullopt unless every cluster has exactly one active neuron
inline std::optional<Message> decode(const ActivationState& state) {
    const NetworkConfig& cfg = state.config();
    Message msg;
    msg.symbols.reserve(cfg.cluster_count);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        auto sole = state.cluster_sole_active(c);
        if (!sole) return std::nullopt;
        msg.symbols.push_back(*sole);
    }
    return msg;
}

// One neuron per cluster, at most one member per cluster, members kept
// sorted by cluster index.
struct Clique {
    std::vector<NeuronRef> members;

    size_t size() const { return members.size(); }

    friend bool operator==(const Clique&, const Clique&) = default;
};

// Message spelled by a full clique (one member in every cluster); nullopt
// for partial cliques.
inline std::optional<Message> message_from(const Clique& clique, const NetworkConfig& cfg) {
    if (clique.members.size() != cfg.cluster_count) return std::nullopt;
    Message msg;
    msg.symbols.assign(cfg.cluster_count, 0);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        if (clique.members[c].cluster != c) return std::nullopt;
        msg.symbols[c] = clique.members[c].local;
    }
    return msg;
}

} // namespace csam
