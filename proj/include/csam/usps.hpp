#pragma once

// USPS digit benchmark: 16x16 grayscale images become two 16-symbol
// messages over 256-neuron clusters. Pixels binarize at mid-gray; each
// symbol packs 8 successive row-major pixels, first pixel in the high bit.
// Message one covers pixels 0..127, message two pixels 128..255.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csam/bench.hpp"
#include "csam/network.hpp"

namespace csam {

struct UspsSample {
    int label = 0;
    std::array<uint8_t, 256> pixels{}; // binarized, 0 or 1
};

// Text format, one sample per line: a label followed by 256 grayscale
// values in [0, 255], whitespace-separated. Values at or above 127.5 map
// to 1. Throws std::runtime_error on malformed input.
std::vector<UspsSample> usps_load(const std::string& path);

std::pair<Message, Message> usps_encode(const std::array<uint8_t, 256>& pixels);
std::array<uint8_t, 256> usps_decode(const Message& first_half, const Message& second_half);

struct UspsBenchConfig {
    uint32_t stored_images = 5000;
    uint32_t probe_count = 1000; // probe images per repetition
    uint32_t corrupt_symbols = 4;
    uint32_t repetitions = 3;
    uint64_t seed = 1;
    uint32_t theta_relax = 0; // baseline threshold relaxation
    bool measure_time = true;

    std::vector<std::pair<std::string, std::string>> to_keys() const;
};

// Stores both messages of each sampled image in a 16x256 clique memory and
// a same-size baseline memory, then retrieves corrupted probes drawn from
// the stored set: per probe image, each of its two messages gets
// corrupt_symbols distinct symbols replaced by random different bytes, and
// both memories see the identical corrupted message. Returns one record
// for tag "cut-and-paste" and one for tag "willshaw"; stored_count is the
// message count (two per image).
std::vector<TrialRecord> run_usps_bench(const std::vector<UspsSample>& samples,
                                        const UspsBenchConfig& config);

} // namespace csam
