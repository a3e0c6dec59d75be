#pragma once

// Clique storage. A stored message becomes a fully connected set of one
// neuron per cluster in a symmetric bit adjacency matrix whose diagonal is
// all ones (every neuron supports itself); off-diagonal intra-cluster bits
// never get set. A per-neuron frequency counter is bumped on every store,
// duplicates included.
//
// Writing happens in a single-threaded storing phase; afterwards the memory
// is read-only and safe for any number of concurrent retrievals.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csam/bits.hpp"
#include "csam/network.hpp"

namespace csam {

class CliqueMemory {
public:
    explicit CliqueMemory(const NetworkConfig& cfg);

    const NetworkConfig& config() const { return cfg_; }

    // throws std::invalid_argument on an out-of-range symbol
    void store(const Message& msg);

    // all pairwise edges of the message's clique present
    bool contains_clique(const Message& msg) const;

    bool edge(uint32_t a, uint32_t b) const { return adjacency_.test(a, b); }
    std::span<const uint64_t> row(uint32_t k) const { return adjacency_.row(k); }
    const BitMatrix& adjacency() const { return adjacency_; }

    const std::vector<uint32_t>& frequency() const { return frequency_; }
    uint32_t stored_count() const { return stored_count_; }

private:
    friend CliqueMemory load_snapshot(const std::string& path);

    NetworkConfig cfg_;
    BitMatrix adjacency_;
    std::vector<uint32_t> frequency_;
    uint32_t stored_count_ = 0;
};

struct FootprintBits {
    uint64_t core_bits = 0;               // upper-triangle adjacency
    uint64_t frequency_overhead_bits = 0; // ceil(n * log2(stored_count + 1))
};

FootprintBits footprint_bits(const CliqueMemory& mem);

// Snapshot text format, version 1:
//   line 1            "CSAM v1 <clusters> <neurons_per_cluster> <stored_count>"
//   lines 2..n-1      strictly-upper-triangle adjacency bits of rows 0..n-2,
//                     row i covering columns i+1..n-1, packed MSB-first into
//                     bytes (fresh byte per row), lowercase hex
//   next n lines      frequency counters, decimal
// Loading validates the header, geometry, hex digits, the no-intra-cluster
// invariant and the per-cluster frequency sums; throws std::runtime_error
// on any violation.
void save_snapshot(const CliqueMemory& mem, const std::string& path);
CliqueMemory load_snapshot(const std::string& path);

} // namespace csam
