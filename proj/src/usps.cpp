#include "csam/usps.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "csam/rng.hpp"
#include "csam/willshaw.hpp"

namespace csam {

std::vector<UspsSample> usps_load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open dataset: " + path);
    std::vector<UspsSample> samples;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        UspsSample sample;
        double value = 0.0;
        if (!(fields >> value))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad label");
        sample.label = static_cast<int>(value);
        for (uint32_t p = 0; p < 256; ++p) {
            if (!(fields >> value))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected 256 pixel values");
            if (value < 0.0 || value > 255.0)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": pixel value outside [0, 255]");
            sample.pixels[p] = value >= 127.5 ? 1 : 0;
        }
        if (fields >> value)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": trailing values");
        samples.push_back(sample);
    }
    return samples;
}

std::pair<Message, Message> usps_encode(const std::array<uint8_t, 256>& pixels) {
    Message first, second;
    first.symbols.resize(16);
    second.symbols.resize(16);
    for (uint32_t block = 0; block < 32; ++block) {
        uint32_t byte = 0;
        for (uint32_t t = 0; t < 8; ++t)
            byte = byte << 1 | (pixels[block * 8 + t] ? 1 : 0);
        if (block < 16)
            first.symbols[block] = byte;
        else
            second.symbols[block - 16] = byte;
    }
    return {std::move(first), std::move(second)};
}

std::array<uint8_t, 256> usps_decode(const Message& first_half, const Message& second_half) {
    if (first_half.symbols.size() != 16 || second_half.symbols.size() != 16)
        throw std::invalid_argument("usps halves must carry 16 symbols each");
    std::array<uint8_t, 256> pixels{};
    for (uint32_t block = 0; block < 32; ++block) {
        uint32_t byte = block < 16 ? first_half.symbols[block] : second_half.symbols[block - 16];
        for (uint32_t t = 0; t < 8; ++t)
            pixels[block * 8 + t] = (byte >> (7 - t)) & 1;
    }
    return pixels;
}

std::vector<std::pair<std::string, std::string>> UspsBenchConfig::to_keys() const {
    std::vector<std::pair<std::string, std::string>> keys;
    keys.emplace_back("clusters", "16");
    keys.emplace_back("neurons", "256");
    keys.emplace_back("usps.stored_images", std::to_string(stored_images));
    keys.emplace_back("usps.probe_count", std::to_string(probe_count));
    keys.emplace_back("usps.corrupt_symbols", std::to_string(corrupt_symbols));
    keys.emplace_back("repetitions", std::to_string(repetitions));
    keys.emplace_back("seed", std::to_string(seed));
    keys.emplace_back("usps.theta_relax", std::to_string(theta_relax));
    keys.emplace_back("measure_time", measure_time ? "1" : "0");
    return keys;
}

namespace {

using Clock = std::chrono::steady_clock;

Message corrupt_message(const Message& msg, uint32_t corrupt_symbols, SplitMix64& rng) {
    const uint32_t C = static_cast<uint32_t>(msg.symbols.size());
    std::vector<uint32_t> positions;
    while (positions.size() < corrupt_symbols) {
        uint32_t c = static_cast<uint32_t>(rng.next_below(C));
        if (std::find(positions.begin(), positions.end(), c) == positions.end())
            positions.push_back(c);
    }
    std::sort(positions.begin(), positions.end());
    Message corrupted = msg;
    for (uint32_t c : positions) {
        uint32_t r = static_cast<uint32_t>(rng.next_below(255));
        corrupted.symbols[c] = r + (r >= msg.symbols[c] ? 1 : 0);
    }
    return corrupted;
}

struct Tally {
    uint64_t trials = 0;
    uint64_t msg_hits = 0;
    uint64_t sym_hits = 0;
    double time_sum = 0.0;
    std::vector<double> times;
};

TrialRecord to_record(const Tally& tally, uint32_t stored_messages, const std::string& tag,
                      bool measure_time) {
    TrialRecord rec;
    rec.stored_count = stored_messages;
    rec.algorithm = tag;
    rec.trials = tally.trials;
    rec.msg_rate = tally.trials ? static_cast<double>(tally.msg_hits) / tally.trials : 0.0;
    rec.sym_rate = tally.trials ? static_cast<double>(tally.sym_hits) / (tally.trials * 16) : 0.0;
    if (measure_time && tally.trials) {
        rec.mean_time_s = tally.time_sum / tally.trials;
        std::vector<double> sorted = tally.times;
        std::sort(sorted.begin(), sorted.end());
        size_t mid = sorted.size() / 2;
        rec.median_time_s =
            sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
    }
    return rec;
}

} // namespace

std::vector<TrialRecord> run_usps_bench(const std::vector<UspsSample>& samples,
                                        const UspsBenchConfig& config) {
    if (config.stored_images == 0 || config.probe_count == 0 || config.repetitions == 0)
        throw std::invalid_argument("usps bench needs positive counts");
    if (config.corrupt_symbols == 0 || config.corrupt_symbols > 16)
        throw std::invalid_argument("usps bench corrupts between 1 and 16 symbols");
    if (samples.size() < config.stored_images)
        throw std::invalid_argument("dataset smaller than the requested stored image count");

    const NetworkConfig net(16, 256);
    Tally csam_tally, willshaw_tally;

    for (uint32_t rep = 0; rep < config.repetitions; ++rep) {
        uint64_t rep_seed = derive_stream(config.seed, rep);

        std::vector<uint32_t> indices(samples.size());
        for (uint32_t i = 0; i < indices.size(); ++i) indices[i] = i;
        SplitMix64 pick(derive_stream(rep_seed, 0));
        for (uint32_t i = 0; i < config.stored_images; ++i) {
            uint32_t j = i + static_cast<uint32_t>(pick.next_below(indices.size() - i));
            std::swap(indices[i], indices[j]);
        }

        CliqueMemory mem(net);
        WillshawMemory baseline(net.total_neurons());
        std::vector<std::pair<Message, Message>> stored(config.stored_images);
        for (uint32_t i = 0; i < config.stored_images; ++i) {
            stored[i] = usps_encode(samples[indices[i]].pixels);
            mem.store(stored[i].first);
            mem.store(stored[i].second);
            baseline.store(encode(net, stored[i].first).bits());
            baseline.store(encode(net, stored[i].second).bits());
        }

        uint64_t probe_seed = derive_stream(rep_seed, 1);
        for (uint32_t t = 0; t < config.probe_count; ++t) {
            SplitMix64 rng(derive_stream(probe_seed, t));
            const auto& image = stored[rng.next_below(config.stored_images)];
            for (const Message* half : {&image.first, &image.second}) {
                Message corrupted = corrupt_message(*half, config.corrupt_symbols, rng);
                ActivationState probe = encode(net, corrupted);

                RetrievalOutcome outcome = retrieve_cut_and_paste(mem, probe);
                ++csam_tally.trials;
                if (outcome.message) {
                    if (*outcome.message == *half) ++csam_tally.msg_hits;
                    for (uint32_t c = 0; c < 16; ++c)
                        if (outcome.message->symbols[c] == half->symbols[c])
                            ++csam_tally.sym_hits;
                }
                if (config.measure_time) {
                    csam_tally.time_sum += outcome.elapsed.count();
                    csam_tally.times.push_back(outcome.elapsed.count());
                }

                auto t0 = Clock::now();
                BitVec survivors = baseline.retrieve(probe.bits(), config.theta_relax);
                std::chrono::duration<double> took = Clock::now() - t0;
                ++willshaw_tally.trials;
                uint32_t correct = 0;
                for (uint32_t c = 0; c < 16; ++c) {
                    uint32_t base = c * 256;
                    if (survivors.count_in_range(base, 256) != 1) continue;
                    if (survivors.test(base + half->symbols[c])) ++correct;
                }
                willshaw_tally.sym_hits += correct;
                if (correct == 16) ++willshaw_tally.msg_hits;
                if (config.measure_time) {
                    willshaw_tally.time_sum += took.count();
                    willshaw_tally.times.push_back(took.count());
                }
            }
        }
    }

    uint32_t stored_messages = config.stored_images * 2;
    return {to_record(csam_tally, stored_messages, "cut-and-paste", config.measure_time),
            to_record(willshaw_tally, stored_messages, "willshaw", config.measure_time)};
}

} // namespace csam
