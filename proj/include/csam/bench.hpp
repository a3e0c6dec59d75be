#pragma once

// Benchmark harness: seeded sweeps over stored-message counts, per-trial
// probe corruption, per-algorithm retrieval-rate and timing aggregation,
// CSV/JSON emission.
//
// Determinism: everything derives from ExperimentConfig.seed through the
// documented stream hierarchy -- repetition r uses derive_stream(seed, r);
// its message list uses child stream 0; stored-count point i uses child
// stream 1 + i; trial t of a point uses that point's child stream t, which
// draws the probe's message index and then a fresh injection seed. Probe
// streams never depend on the algorithm, so every algorithm in a sweep
// faces identical corrupted probes. ErrorSpec.seed from the config is not
// used by sweeps (each trial gets a derived seed); it only matters for
// standalone inject() calls. With measure_time=false the timing columns
// are exactly 0 and repeated runs emit byte-identical CSV.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csam/error_model.hpp"
#include "csam/network.hpp"
#include "csam/retrieval.hpp"

namespace csam {

struct ExperimentConfig {
    NetworkConfig network;
    std::vector<uint32_t> stored_counts; // ascending, positive
    uint32_t test_count = 200;
    ErrorSpec error;
    std::vector<Algorithm> algorithms;
    uint64_t seed = 1;
    uint32_t repetitions = 1;
    bool measure_time = true;

    void validate() const; // throws std::invalid_argument

    std::vector<std::pair<std::string, std::string>> to_keys() const;
    static ExperimentConfig from_keys(const std::map<std::string, std::string>& keys);
};

struct TrialRecord {
    uint32_t stored_count = 0;
    std::string algorithm;
    uint64_t trials = 0;
    double msg_rate = 0.0;
    double sym_rate = 0.0;
    double mean_time_s = 0.0;
    double median_time_s = 0.0; // JSON output only
    uint64_t conv_failures = 0;
    uint64_t unsound = 0; // returned messages whose clique is not fully stored
};

// count uniform messages; one SplitMix64 stream seeded with `seed`, symbols
// drawn message by message, cluster by cluster
std::vector<Message> generate_messages(const NetworkConfig& cfg, size_t count, uint64_t seed);

// one record per (stored_count, algorithm), stored counts in config order,
// algorithms in config order within a count
std::vector<TrialRecord> run_sweep(const ExperimentConfig& config);

enum class EmitFormat { Csv, Json };

// snprintf "%.6g"; the one float formatting used in CSV output
std::string format_double(double value);

void emit_csv(const std::vector<TrialRecord>& records,
              const std::vector<std::pair<std::string, std::string>>& metadata,
              std::ostream& out);
void emit_json(const std::vector<TrialRecord>& records,
               const std::vector<std::pair<std::string, std::string>>& metadata,
               std::ostream& out);
void emit(const std::vector<TrialRecord>& records, const ExperimentConfig& config,
          EmitFormat format, const std::string& path);

struct ParsedCsv {
    std::map<std::string, std::string> metadata;
    std::vector<TrialRecord> records;
};
ParsedCsv parse_csv(std::istream& in);

// "key = value" lines, '#' comments, duplicates rejected
std::map<std::string, std::string> parse_key_value_file(const std::string& path);
ExperimentConfig load_config_file(const std::string& path);

} // namespace csam
