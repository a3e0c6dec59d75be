#pragma once

// Willshaw-style binary associative memory baseline. Storing OR-accumulates
// the outer product of a pattern with itself (diagonal included); retrieval
// is a single thresholding pass, no cluster structure and no iteration.

#include <cstdint>

#include "csam/bits.hpp"

namespace csam {

class WillshawMemory {
public:
    explicit WillshawMemory(uint32_t units)
        : units_(units), weights_(units, units) {}

    uint32_t units() const { return units_; }
    uint64_t stored_count() const { return stored_; }

    void store(const BitVec& pattern) {
        pattern.for_each_set([&](uint32_t i) {
            auto dst = weights_.row(i);
            auto src = pattern.words();
            for (size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
        });
        ++stored_;
    }

    // Units whose overlap with the probe reaches the probe's active count
    // minus theta_relax (clamped to at least 1). With theta_relax = 0 only
    // units connected to every active probe bit survive.
    BitVec retrieve(const BitVec& probe, uint32_t theta_relax = 0) const {
        uint32_t active = probe.count();
        uint32_t theta = active > theta_relax ? active - theta_relax : 1;
        BitVec out(units_);
        for (uint32_t i = 0; i < units_; ++i)
            if (bits::count_and(weights_.row(i), probe.words()) >= theta)
                out.set(i);
        return out;
    }

private:
    uint32_t units_;
    BitMatrix weights_;
    uint64_t stored_ = 0;
};

} // namespace csam
