// Command line front end: simulated and USPS benchmarks, snapshot creation,
// single-probe queries against a snapshot.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csam/bench.hpp"
#include "csam/memory.hpp"
#include "csam/retrieval.hpp"
#include "csam/usps.hpp"

namespace {

std::vector<csam::Message> read_messages(std::istream& in, const csam::NetworkConfig& cfg,
                                         const std::string& source) {
    std::vector<csam::Message> messages;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream fields(line);
        csam::Message msg;
        uint32_t symbol = 0;
        while (fields >> symbol)
            msg.symbols.push_back(symbol);
        if (msg.symbols.empty()) continue;
        if (!msg.valid_for(cfg))
            throw std::runtime_error(source + ":" + std::to_string(lineno) +
                                     ": message does not fit the network");
        messages.push_back(std::move(msg));
    }
    return messages;
}

// Probe tokens, one per cluster, comma-separated: an integer activates that
// neuron, `a|b|c` activates several, `*` the whole cluster, `?` none.
csam::ActivationState parse_probe(const std::string& text, const csam::NetworkConfig& cfg) {
    std::vector<std::string> tokens;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        tokens.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    if (tokens.size() != cfg.cluster_count)
        throw std::runtime_error("probe needs one token per cluster (" +
                                 std::to_string(cfg.cluster_count) + ")");
    csam::ActivationState state(cfg);
    for (uint32_t c = 0; c < cfg.cluster_count; ++c) {
        const std::string& token = tokens[c];
        if (token == "?") continue;
        if (token == "*") {
            state.bits().set_range(c * cfg.neurons_per_cluster, cfg.neurons_per_cluster);
            continue;
        }
        size_t pos = 0;
        while (pos <= token.size()) {
            size_t bar = token.find('|', pos);
            if (bar == std::string::npos) bar = token.size();
            std::string item = token.substr(pos, bar - pos);
            size_t used = 0;
            unsigned long value = std::stoul(item, &used);
            if (used != item.size() || value >= cfg.neurons_per_cluster)
                throw std::runtime_error("bad probe symbol: " + item);
            state.set(c * cfg.neurons_per_cluster + static_cast<uint32_t>(value));
            pos = bar + 1;
        }
    }
    return state;
}

csam::PartialMessage parse_partial(const std::string& text, const csam::NetworkConfig& cfg) {
    csam::PartialMessage partial;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        std::string token = text.substr(start, comma - start);
        if (token == "?") {
            partial.symbols.push_back(std::nullopt);
        } else {
            size_t used = 0;
            unsigned long value = std::stoul(token, &used);
            if (used != token.size() || value >= cfg.neurons_per_cluster)
                throw std::runtime_error("bad probe symbol: " + token);
            partial.symbols.push_back(static_cast<uint32_t>(value));
        }
        start = comma + 1;
    }
    if (partial.symbols.size() != cfg.cluster_count)
        throw std::runtime_error("probe needs one token per cluster (" +
                                 std::to_string(cfg.cluster_count) + ")");
    return partial;
}

void print_outcome(const csam::RetrievalOutcome& outcome) {
    if (outcome.message) {
        std::cout << "message:";
        for (uint32_t s : outcome.message->symbols)
            std::cout << ' ' << s;
        std::cout << '\n';
    } else {
        std::cout << "message: none\n";
    }
    std::cout << "iterations: " << outcome.iterations << '\n'
              << "converged: " << (outcome.converged ? "yes" : "no") << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"clustered clique-memory benchmarks and queries"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("bench-sim", "run a simulated-message sweep");
    std::string sim_config, sim_out;
    bool sim_json = false;
    sim->add_option("--config", sim_config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--out", sim_out, "output file")->required();
    sim->add_flag("--json", sim_json, "emit JSON instead of CSV");

    auto* usps = app.add_subcommand("bench-usps", "run the digit-image benchmark");
    std::string usps_data, usps_out;
    csam::UspsBenchConfig usps_config;
    bool usps_json = false, usps_no_timing = false;
    usps->add_option("--data", usps_data, "dataset file")->required()->check(CLI::ExistingFile);
    usps->add_option("--stored", usps_config.stored_images, "images to store");
    usps->add_option("--probes", usps_config.probe_count, "probe images per repetition");
    usps->add_option("--corrupt-symbols", usps_config.corrupt_symbols,
                     "corrupted symbols per message");
    usps->add_option("--reps", usps_config.repetitions, "repetitions");
    usps->add_option("--seed", usps_config.seed, "master seed");
    usps->add_option("--theta-relax", usps_config.theta_relax,
                     "baseline threshold relaxation");
    usps->add_flag("--no-timing", usps_no_timing, "zero the timing columns");
    usps->add_option("--out", usps_out, "output file")->required();
    usps->add_flag("--json", usps_json, "emit JSON instead of CSV");

    auto* store = app.add_subcommand("store", "store messages and write a snapshot");
    std::string store_snapshot, store_messages = "-";
    uint32_t store_clusters = 0, store_neurons = 0;
    store->add_option("--snapshot", store_snapshot, "snapshot file to write")->required();
    store->add_option("--clusters", store_clusters, "cluster count")->required();
    store->add_option("--neurons", store_neurons, "neurons per cluster")->required();
    store->add_option("--messages", store_messages,
                      "message file, one message per line ('-' for stdin)");

    auto* query = app.add_subcommand("query", "retrieve one probe against a snapshot");
    std::string query_snapshot, query_algorithm, query_probe;
    query->add_option("--snapshot", query_snapshot, "snapshot file")
        ->required()
        ->check(CLI::ExistingFile);
    query->add_option("--algorithm", query_algorithm,
                      "direct, direct-plus, construct, delegate, cut-and-paste or erasure")
        ->required();
    query->add_option("--probe", query_probe,
                      "per-cluster tokens: symbol, a|b, * (all) or ? (none)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            csam::ExperimentConfig config = csam::load_config_file(sim_config);
            std::vector<csam::TrialRecord> records = csam::run_sweep(config);
            csam::emit(records, config,
                       sim_json ? csam::EmitFormat::Json : csam::EmitFormat::Csv, sim_out);
            std::cout << "wrote " << records.size() << " records to " << sim_out << '\n';
        } else if (usps->parsed()) {
            usps_config.measure_time = !usps_no_timing;
            std::vector<csam::UspsSample> samples = csam::usps_load(usps_data);
            std::vector<csam::TrialRecord> records = csam::run_usps_bench(samples, usps_config);
            std::ofstream out(usps_out, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open output file: " + usps_out);
            if (usps_json)
                csam::emit_json(records, usps_config.to_keys(), out);
            else
                csam::emit_csv(records, usps_config.to_keys(), out);
            std::cout << "wrote " << records.size() << " records to " << usps_out << '\n';
        } else if (store->parsed()) {
            csam::NetworkConfig cfg(store_clusters, store_neurons);
            csam::CliqueMemory mem(cfg);
            std::vector<csam::Message> messages;
            if (store_messages == "-") {
                messages = read_messages(std::cin, cfg, "<stdin>");
            } else {
                std::ifstream in(store_messages);
                if (!in)
                    throw std::runtime_error("cannot open message file: " + store_messages);
                messages = read_messages(in, cfg, store_messages);
            }
            for (const csam::Message& msg : messages)
                mem.store(msg);
            csam::save_snapshot(mem, store_snapshot);
            csam::FootprintBits fp = csam::footprint_bits(mem);
            std::cout << "stored " << mem.stored_count() << " messages, snapshot "
                      << store_snapshot << " (core " << fp.core_bits << " bits, counters "
                      << fp.frequency_overhead_bits << " bits)\n";
        } else if (query->parsed()) {
            csam::CliqueMemory mem = csam::load_snapshot(query_snapshot);
            auto algorithm = csam::algorithm_from_tag(query_algorithm);
            if (!algorithm)
                throw std::runtime_error("unknown algorithm: " + query_algorithm);
            csam::RetrievalOutcome outcome;
            if (*algorithm == csam::Algorithm::Erasure)
                outcome = csam::retrieve_erasure(mem, parse_partial(query_probe, mem.config()));
            else
                outcome = csam::retrieve(mem, parse_probe(query_probe, mem.config()), *algorithm);
            print_outcome(outcome);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 0;
}
